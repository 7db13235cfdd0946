// dense_eigen.hpp — test-only dense symmetric eigensolver (cyclic Jacobi).
// Independent oracle for the tridiagonal solver in sg/transfer.hpp.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "sg/transfer.hpp"

namespace sg::test {

struct DenseEigenResult {
    std::vector<double> values;              // ascending
    std::vector<std::vector<double>> vectors; // vectors[i] belongs to values[i]
};

// Cyclic Jacobi sweeps until all off-diagonal mass is annihilated.
inline DenseEigenResult jacobi_eigen(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-28) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });

    DenseEigenResult res;
    res.values.resize(n);
    res.vectors.assign(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        res.values[i] = a[order[i]][order[i]];
        for (std::size_t k = 0; k < n; ++k) res.vectors[i][k] = v[k][order[i]];
    }
    return res;
}

inline std::vector<std::vector<double>> dense_from_tridiag(const sg::transfer::TridiagMatrix& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = m.diag[i];
        if (i + 1 < n) a[i][i + 1] = a[i + 1][i] = m.off[i];
    }
    return a;
}

// Oracle ground state: dense diagonalisation at truncation K, then the same
// symmetrisation/normalisation conventions as the production path.
inline sg::transfer::GroundState oracle_ground_state(const sg::transfer::SgParams& params, int K) {
    const auto m = sg::transfer::build_operator(params, K);
    auto eig = jacobi_eigen(dense_from_tridiag(m));

    sg::transfer::GroundState gs;
    gs.Q = params.Q;
    gs.K = K;
    gs.eigenvalue = eig.values[0];
    gs.coeffs = eig.vectors[0];

    const std::size_t n = gs.coeffs.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double avg = 0.5 * (gs.coeffs[i] + gs.coeffs[n - 1 - i]);
        gs.coeffs[i] = gs.coeffs[n - 1 - i] = avg;
    }
    double sum = 0.0, norm2 = 0.0;
    for (double c : gs.coeffs) {
        sum += c;
        norm2 += c * c;
    }
    const double scale = (sum < 0.0 ? -1.0 : 1.0) / std::sqrt(sg::two_pi * norm2);
    for (double& c : gs.coeffs) c *= scale;
    return gs;
}

} // namespace sg::test
