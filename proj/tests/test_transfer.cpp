#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "sg/transfer.hpp"
#include "support/dense_eigen.hpp"
#include "support/paths.hpp"

using namespace sg;
using namespace sg::transfer;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct GoldenRow {
    double Q, eigenvalue, coherence;
};

std::vector<GoldenRow> load_golden() {
    std::ifstream in(sg::test::fixture_path("transfer_golden.txt"));
    REQUIRE(in.good());
    std::vector<GoldenRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        GoldenRow r{};
        ss >> r.Q >> r.eigenvalue >> r.coherence;
        rows.push_back(r);
    }
    REQUIRE(rows.size() == 21);
    return rows;
}

} // namespace

TEST_CASE("params_from_physical maps SI inputs to (Q, lambda_T, D)") {
    // 87Rb, n = 100/um, T and J chosen so lambda_T = 25 um and l_J = 5 um
    // (values hand-computed from the defining formulas)
    PhysicalParams p;
    p.m = sg::constants::m_rb87;
    p.n = 100.0;
    p.T = 4.4652345195395945e-08;
    p.J = 7.307375224223138;
    const SgParams sp = params_from_physical(p);
    CHECK_THAT(sp.Q, WithinRel(5.0, 1e-12));
    CHECK_THAT(sp.lambda_T, WithinRel(25.0, 1e-12));
    CHECK_THAT(sp.D, WithinRel(0.08, 1e-12));

    SECTION("Q -> 0 as J -> 0") {
        p.J = 1e-30;
        CHECK(params_from_physical(p).Q < 1e-10);
    }
    SECTION("Q is linear in lambda_T at fixed l_J") {
        PhysicalParams half = p;
        half.T *= 2.0; // halves lambda_T
        CHECK_THAT(params_from_physical(p).Q, WithinRel(2.0 * params_from_physical(half).Q, 1e-12));
    }
    SECTION("non-positive input is a domain error") {
        p.T = 0.0;
        CHECK_THROWS_AS(params_from_physical(p), config_error);
    }
}

TEST_CASE("build_operator assembles the plane-wave tridiagonal matrix") {
    SECTION("Q = 0 leaves only the kinetic diagonal") {
        const auto m = build_operator(SgParams::from_Q(0.0, 2.0), 8);
        REQUIRE(m.size() == 17);
        for (int k = -8; k <= 8; ++k)
            CHECK_THAT(m.diag[size_t(k + 8)], WithinAbs(2.0 * k * k / 2.0, 1e-15));
        for (double e : m.off) CHECK(e == 0.0);
    }
    SECTION("centre element at Q = 2, lambda_T = 1 is exactly 1") {
        const auto m = build_operator(SgParams::from_Q(2.0, 1.0), 32);
        CHECK_THAT(m.diag[32], WithinAbs(1.0, 1e-15));
        CHECK_THAT(m.off[31], WithinAbs(-0.5, 1e-15));
    }
    SECTION("K below 8 is rejected") {
        CHECK_THROWS_AS(build_operator(SgParams::from_Q(1.0, 1.0), 4), config_error);
    }
}

TEST_CASE("ground_state at Q = 0 is the flat mode") {
    const auto gs = ground_state(SgParams::from_Q(0.0, 1.0));
    CHECK_THAT(gs.eigenvalue, WithinAbs(0.0, 1e-12));
    for (int k = 1; k <= gs.K; ++k) CHECK_THAT(gs.coeff(k), WithinAbs(0.0, 1e-12));
    const double flat = 1.0 / std::sqrt(two_pi);
    for (double phi : {-3.0, -1.0, 0.0, 0.7, 2.9})
        CHECK_THAT(gs.psi(phi), WithinRel(flat, 1e-12));
}

TEST_CASE("ground_state matches the dense oracle eigenvalue") {
    // golden row frozen from the K = 128 dense diagonalisation
    const auto gs = ground_state(SgParams::from_Q(4.0, 1.0), 32);
    CHECK_THAT(gs.eigenvalue, WithinAbs(1.859740590848739, 1e-10));

    // live cross-check against the oracle at a smaller truncation
    const auto oracle = sg::test::oracle_ground_state(SgParams::from_Q(4.0, 1.0), 48);
    CHECK_THAT(gs.eigenvalue, WithinAbs(oracle.eigenvalue, 1e-10));
}

TEST_CASE("ground_state peaking at strong coupling") {
    const auto gs = ground_state(SgParams::from_Q(6.0, 1.0));
    const double ratio = gs.psi(0.0) / gs.psi(pi);
    CHECK(ratio > 100.0);
    CHECK_THAT(ratio, WithinRel(138.9664371863, 1e-8));
}

TEST_CASE("stationary_density basics") {
    SECTION("uniform at Q = 0") {
        const auto gs = ground_state(SgParams::from_Q(0.0, 1.0));
        for (double phi : {-2.0, 0.0, 1.3})
            CHECK_THAT(stationary_density(gs, phi), WithinRel(1.0 / two_pi, 1e-12));
    }
    SECTION("even in phi and periodic") {
        const auto gs = ground_state(SgParams::from_Q(3.0, 1.0));
        for (double phi : {0.3, 1.1, 2.7}) {
            CHECK_THAT(stationary_density(gs, phi), WithinRel(stationary_density(gs, -phi), 1e-12));
            CHECK_THAT(stationary_density(gs, phi + two_pi),
                       WithinRel(stationary_density(gs, phi), 1e-12));
        }
    }
    SECTION("golden value at Q = 4") {
        const auto gs = ground_state(SgParams::from_Q(4.0, 1.0));
        CHECK_THAT(stationary_density(gs, 0.0), WithinRel(0.531318852336217, 1e-10));
    }
}

TEST_CASE("drift is the restoring log-derivative of the ground state") {
    SECTION("vanishes identically at Q = 0") {
        const auto p = SgParams::from_Q(0.0, 1.0);
        const auto gs = ground_state(p);
        for (double phi : {-2.0, 0.4, 3.0}) CHECK_THAT(drift(gs, p, phi), WithinAbs(0.0, 1e-12));
    }
    SECTION("zero at the symmetry points for any Q") {
        const auto p = SgParams::from_Q(5.0, 1.0);
        const auto gs = ground_state(p);
        CHECK_THAT(drift(gs, p, 0.0), WithinAbs(0.0, 1e-10));
        CHECK_THAT(drift(gs, p, pi), WithinAbs(0.0, 1e-6)); // psi(pi) is small, ratio noisier
    }
    SECTION("golden value at Q = 4, lambda_T = 20, phi = pi/2") {
        const auto p = SgParams::from_Q(4.0, 20.0);
        const auto gs = ground_state(p);
        CHECK_THAT(drift(gs, p, pi / 2.0), WithinRel(-0.255957286999, 1e-8));
    }
    SECTION("odd and restoring on (-pi, pi)") {
        const auto p = SgParams::from_Q(4.0, 20.0);
        const auto gs = ground_state(p);
        for (double phi = -3.0; phi < 3.01; phi += 0.25) {
            CHECK_THAT(drift(gs, p, phi), WithinAbs(-drift(gs, p, -phi), 1e-10));
            CHECK(drift(gs, p, phi) * phi <= 1e-12);
        }
    }
}

TEST_CASE("coherence factor properties") {
    SECTION("zero at Q = 0, approaching one at very strong coupling") {
        CHECK(coherence_of_Q(ground_state(SgParams::from_Q(0.0, 1.0))) == 0.0);
        CHECK(coherence_of_Q(ground_state(SgParams::from_Q(200.0, 1.0))) > 0.99);
    }
    SECTION("golden monotone table") {
        const double expect[] = {0.123327024494, 0.417999038194, 0.744149307178,
                                 0.832832982262, 0.874846339305};
        const double qs[] = {1.0, 2.0, 4.0, 6.0, 8.0};
        double prev = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double c = coherence_of_Q(ground_state(SgParams::from_Q(qs[i], 1.0)));
            CHECK_THAT(c, WithinRel(expect[i], 1e-9));
            CHECK(c > prev);
            prev = c;
        }
    }
}

TEST_CASE("golden fixture matches both implementation and oracle conventions") {
    const auto rows = load_golden();
    for (const auto& r : rows) {
        const auto gs = ground_state(SgParams::from_Q(r.Q, 1.0));
        CHECK_THAT(gs.eigenvalue, WithinAbs(r.eigenvalue, 1e-8));
        CHECK_THAT(coherence_of_Q(gs), WithinAbs(r.coherence, 1e-8));
    }
}

TEST_CASE("ground-state invariants across the coupling range") {
    for (double q = 0.0; q <= 10.0; q += 1.0) {
        const auto gs = ground_state(SgParams::from_Q(q, 1.0));

        // normalisation: 2 pi sum c_k^2 = 1, checked by quadrature too
        double norm2 = 0.0;
        for (double c : gs.coeffs) norm2 += c * c;
        CHECK_THAT(two_pi * norm2, WithinAbs(1.0, 1e-10));

        const int n = 4096;
        double quad = 0.0, quad_cos = 0.0;
        for (int i = 0; i < n; ++i) {
            const double phi = -pi + (i + 0.5) * two_pi / n;
            const double rho = stationary_density(gs, phi);
            quad += rho;
            quad_cos += rho * std::cos(phi);
        }
        quad *= two_pi / n;
        quad_cos *= two_pi / n;
        CHECK_THAT(quad, WithinAbs(1.0, 1e-10));

        // Fourier coefficient sum vs direct quadrature of |psi|^2 cos
        CHECK_THAT(coherence_of_Q(gs), WithinAbs(quad_cos, 1e-8));

        // even symmetry of the coefficients
        for (int k = 1; k <= gs.K; ++k) CHECK(gs.coeff(k) == gs.coeff(-k));

        // strict positivity on [-pi, pi)
        double min_psi = 1e300;
        for (int i = 0; i < 512; ++i) min_psi = std::min(min_psi, gs.psi(-pi + i * two_pi / 512));
        CHECK(min_psi > 0.0);
    }
}

TEST_CASE("doubling the truncation order changes nothing measurable") {
    for (double q : {2.0, 6.0, 10.0}) {
        const auto a = ground_state(SgParams::from_Q(q, 1.0), 64);
        const auto b = ground_state(SgParams::from_Q(q, 1.0), 128);
        CHECK_THAT(a.eigenvalue, WithinAbs(b.eigenvalue, 1e-10));
        CHECK_THAT(coherence_of_Q(a), WithinAbs(coherence_of_Q(b), 1e-10));
    }
}

TEST_CASE("coherence is non-decreasing on the sampled Q grid") {
    double prev = -1.0;
    for (double q = 0.0; q <= 10.0; q += 0.5) {
        const double c = coherence_of_Q(ground_state(SgParams::from_Q(q, 1.0)));
        CHECK(c >= prev);
        prev = c;
    }
}
