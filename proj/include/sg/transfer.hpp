// transfer.hpp — ground state of the sine-Gordon transfer operator.
//
// The thermal statistics of the relative phase are governed by the auxiliary
// operator K = (1/lambda_T) (-2 d^2/dphi^2 - (Q^2/4)(cos phi - 1)).  Its
// ground state Psi_0 determines the stationary phase density |Psi_0|^2, the
// Ito drift and the coherence factor <cos phi>.  Everything here works in the
// plane-wave basis e^{i k phi}, where K is real symmetric tridiagonal.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sg/constants.hpp"
#include "sg/errors.hpp"

namespace sg::transfer {

struct SgParams {
    double Q;        // dimensionless coupling lambda_T / l_J, >= 0
    double lambda_T; // thermal coherence length, um, > 0
    double D;        // diffusion constant, 1/um, == 2 / lambda_T

    static SgParams from_Q(double Q, double lambda_T) {
        if (!(Q >= 0.0)) throw config_error("SgParams: Q must be >= 0");
        if (!(lambda_T > 0.0)) throw config_error("SgParams: lambda_T must be > 0");
        return SgParams{Q, lambda_T, 2.0 / lambda_T};
    }
};

struct PhysicalParams {
    double J; // tunnel coupling, 1/s
    double n; // linear density, 1/um
    double T; // temperature, K
    double m; // atomic mass, kg
};

// Q = lambda_T / l_J with l_J = sqrt(hbar / (4 m J)) and
// lambda_T = 2 hbar^2 n / (m k_B T); inputs carry the units above.
inline SgParams params_from_physical(const PhysicalParams& p) {
    if (!(p.J > 0.0 && p.n > 0.0 && p.T > 0.0 && p.m > 0.0))
        throw config_error("params_from_physical: all fields must be positive");
    using namespace sg::constants;
    const double n_si = p.n / um_to_metre; // 1/m
    const double lambda_si = 2.0 * hbar * hbar * n_si / (p.m * k_B * p.T);
    const double lj_si = std::sqrt(hbar / (4.0 * p.m * p.J));
    const double lambda_um = lambda_si * metre_to_um;
    const double q = lambda_si / lj_si;
    return SgParams{q, lambda_um, 2.0 / lambda_um};
}

// Symmetric tridiagonal matrix, diag size n and off size n-1.
struct TridiagMatrix {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const { return diag.size(); }
};

// Matrix elements of K in the basis e^{i k phi}, k = -K..K:
//   (k,k)   = (2 k^2 + Q^2/4) / lambda_T
//   (k,k+1) = (k+1,k) = -(Q^2/8) / lambda_T
inline TridiagMatrix build_operator(const SgParams& params, int K) {
    if (K < 8) throw config_error("build_operator: truncation order K must be >= 8");
    const std::size_t n = static_cast<std::size_t>(2 * K + 1);
    TridiagMatrix m;
    m.diag.resize(n);
    m.off.assign(n - 1, -(params.Q * params.Q / 8.0) / params.lambda_T);
    for (int k = -K; k <= K; ++k) {
        m.diag[static_cast<std::size_t>(k + K)] =
            (2.0 * double(k) * double(k) + params.Q * params.Q / 4.0) / params.lambda_T;
    }
    return m;
}

namespace detail {

// Number of eigenvalues of the tridiagonal matrix strictly below x
// (Sturm count via the shifted LDL^T recurrence).
inline int sturm_count(const TridiagMatrix& m, double x) {
    const std::size_t n = m.size();
    int count = 0;
    double q = m.diag[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        double denom = q;
        if (denom == 0.0) denom = 1e-300;
        q = m.diag[i] - x - m.off[i - 1] * m.off[i - 1] / denom;
        if (q < 0.0) ++count;
    }
    return count;
}

// Solve (T - shift I) x = b by Gaussian elimination with partial pivoting.
// The factorisation keeps a second superdiagonal created by row swaps.
inline void shifted_tridiag_solve(const TridiagMatrix& m, double shift, std::vector<double>& x) {
    const std::size_t n = m.size();
    std::vector<double> a(n), b(n, 0.0), c(n, 0.0); // diag, super1, super2
    std::vector<double> sub(n, 0.0);                // subdiagonal (work)
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = m.diag[i] - shift;
        if (i + 1 < n) {
            b[i] = m.off[i];
            sub[i + 1] = m.off[i];
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(sub[i + 1]) > std::abs(a[i])) {
            std::swap(a[i], sub[i + 1]);
            std::swap(b[i], a[i + 1]);
            if (i + 2 < n) std::swap(c[i], b[i + 1]);
            std::swap(x[i], x[i + 1]);
        }
        if (a[i] == 0.0) a[i] = 1e-300;
        const double f = sub[i + 1] / a[i];
        a[i + 1] -= f * b[i];
        if (i + 2 < n) b[i + 1] -= f * c[i];
        x[i + 1] -= f * x[i];
    }
    if (a[n - 1] == 0.0) a[n - 1] = 1e-300;
    x[n - 1] /= a[n - 1];
    if (n >= 2) x[n - 2] = (x[n - 2] - b[n - 2] * x[n - 1]) / a[n - 2];
    for (std::size_t k = n; k-- > 2;) {
        const std::size_t i = k - 2;
        x[i] = (x[i] - b[i] * x[i + 1] - c[i] * x[i + 2]) / a[i];
    }
}

struct SmallestEigenPair {
    double value;
    std::vector<double> vector;
    double residual;
};

// Smallest eigenpair of a symmetric tridiagonal matrix: bisection on the
// Sturm count followed by inverse iteration.
inline SmallestEigenPair smallest_eigenpair(const TridiagMatrix& m) {
    const std::size_t n = m.size();
    double lo = m.diag[0], hi = m.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(m.off[i - 1]) : 0.0) +
                         (i + 1 < n ? std::abs(m.off[i]) : 0.0);
        lo = std::min(lo, m.diag[i] - r);
        hi = std::max(hi, m.diag[i] + r);
    }
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * scale; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(m, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    double lambda = 0.5 * (lo + hi);

    std::vector<double> v(n, 1.0 / std::sqrt(double(n)));
    const double shift = lambda - 1e-12 * scale;
    for (int iter = 0; iter < 6; ++iter) {
        shifted_tridiag_solve(m, shift, v);
        double norm = 0.0;
        for (double c : v) norm += c * c;
        norm = std::sqrt(norm);
        for (double& c : v) c /= norm;
    }
    // Rayleigh quotient refinement of the eigenvalue
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = m.diag[i] * v[i];
        if (i > 0) t += m.off[i - 1] * v[i - 1];
        if (i + 1 < n) t += m.off[i] * v[i + 1];
        num += v[i] * t;
    }
    lambda = num;

    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = m.diag[i] * v[i];
        if (i > 0) t += m.off[i - 1] * v[i - 1];
        if (i + 1 < n) t += m.off[i] * v[i + 1];
        res = std::max(res, std::abs(t - lambda * v[i]));
    }
    if (!(res <= 1e-9 * scale))
        throw numeric_error("smallest_eigenpair: inverse iteration residual " +
                            std::to_string(res) + " exceeds tolerance");
    return {lambda, std::move(v), res};
}

} // namespace detail

// Ground state Psi_0(phi) = sum_k c_k e^{i k phi} with real even coefficients
// (c_k = c_{-k}), phase-fixed to Psi_0(0) > 0 and normalised so that
// \int_{-pi}^{pi} |Psi_0|^2 dphi = 1, i.e. 2 pi sum_k c_k^2 = 1.
struct GroundState {
    double Q = 0.0;
    int K = 0;                  // truncation order; coeffs index k+K
    std::vector<double> coeffs; // size 2K+1
    double eigenvalue = 0.0;    // 1/um (the 1/lambda_T prefactor is included)

    double coeff(int k) const { return coeffs[static_cast<std::size_t>(k + K)]; }

    // Psi_0(phi) = c_0 + 2 sum_{k>=1} c_k cos(k phi)
    double psi(double phi) const {
        const double c = std::cos(phi);
        double ckm1 = 1.0, ck = c; // cos(0), cos(phi)
        double acc = coeff(0);
        for (int k = 1; k <= K; ++k) {
            acc += 2.0 * coeff(k) * ck;
            const double next = 2.0 * c * ck - ckm1;
            ckm1 = ck;
            ck = next;
        }
        return acc;
    }

    // d Psi_0 / d phi = -2 sum_{k>=1} k c_k sin(k phi)
    double psi_prime(double phi) const {
        const double c = std::cos(phi);
        double skm1 = 0.0, sk = std::sin(phi); // sin(0), sin(phi)
        double acc = 0.0;
        for (int k = 1; k <= K; ++k) {
            acc -= 2.0 * double(k) * coeff(k) * sk;
            const double next = 2.0 * c * sk - skm1;
            skm1 = sk;
            sk = next;
        }
        return acc;
    }
};

// Solve for the ground state, doubling the truncation order until the
// relative coefficient tail drops below tol.
inline GroundState ground_state(const SgParams& params, int K = 64, double tol = 1e-12) {
    int k_cur = std::max(K, 8);
    constexpr int k_max = 4096;
    for (;;) {
        const TridiagMatrix m = build_operator(params, k_cur);
        detail::SmallestEigenPair pair = detail::smallest_eigenpair(m);

        GroundState gs;
        gs.Q = params.Q;
        gs.K = k_cur;
        gs.eigenvalue = pair.value;
        gs.coeffs = std::move(pair.vector);

        // even symmetry: c_k <- (c_k + c_{-k}) / 2
        const std::size_t n = gs.coeffs.size();
        for (std::size_t i = 0; i < n / 2; ++i) {
            const double avg = 0.5 * (gs.coeffs[i] + gs.coeffs[n - 1 - i]);
            gs.coeffs[i] = gs.coeffs[n - 1 - i] = avg;
        }
        // fix sign so that Psi_0(0) = sum_k c_k > 0
        double sum = 0.0, norm2 = 0.0;
        for (double c : gs.coeffs) {
            sum += c;
            norm2 += c * c;
        }
        const double sign = (sum < 0.0) ? -1.0 : 1.0;
        const double scale = sign / std::sqrt(two_pi * norm2);
        for (double& c : gs.coeffs) c *= scale;

        double max_abs = 0.0;
        for (double c : gs.coeffs) max_abs = std::max(max_abs, std::abs(c));
        const double tail = std::abs(gs.coeff(k_cur)) / max_abs;
        if (tail < tol || k_cur >= k_max) {
            if (tail >= tol)
                throw numeric_error("ground_state: truncation did not converge at K = " +
                                    std::to_string(k_cur));
            return gs;
        }
        k_cur *= 2;
    }
}

// Stationary probability density |Psi_0(phi)|^2; 2 pi periodic, integrates
// to one over a period.
inline double stationary_density(const GroundState& gs, double phi) {
    const double p = gs.psi(wrap_phase(phi));
    return p * p;
}

// Ito drift A(phi) = sign * 2 D Psi_0'(phi) / Psi_0(phi), in rad/um.
// The sign is resolved empirically against the stationary distribution
// (see sampler::resolve_drift_sign); +1 is the restoring convention.
inline double drift(const GroundState& gs, const SgParams& params, double phi, int sign = +1) {
    const double w = wrap_phase(phi);
    return double(sign) * 2.0 * params.D * gs.psi_prime(w) / gs.psi(w);
}

// Coherence factor <cos phi> = \int |Psi_0|^2 cos phi dphi, evaluated
// analytically from the Fourier coefficients: 2 pi sum_k c_k c_{k+1}.
inline double coherence_of_Q(const GroundState& gs) {
    double acc = 0.0;
    for (int k = -gs.K; k < gs.K; ++k) acc += gs.coeff(k) * gs.coeff(k + 1);
    return two_pi * acc;
}

} // namespace sg::transfer
