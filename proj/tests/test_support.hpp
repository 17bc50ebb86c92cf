#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "solvharm/numerics.hpp"

namespace solvharm::testsupport {

inline Matrix random_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(rng);
    return orthonormalize(m);
}

/// A random real matrix together with its exact spectrum.
struct KnownSpectrum {
    Matrix m;
    std::vector<Complex> eigenvalues;
};

/**
 * Block diagonal with real entries +-a and 2x2 blocks [[a, b], [-b, a]], plus a
 * strictly block-upper perturbation, conjugated by Q1 diag(s) Q2 with s in
 * [1/2, 2]. Every |Re sigma| lies in [re_min, re_max].
 */
inline KnownSpectrum random_known_spectrum(int n, double re_min, double re_max, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix T = Matrix::Zero(n, n);
    std::vector<int> block_start;
    KnownSpectrum out;
    int i = 0;
    while (i < n) {
        const double a = (u(rng) < 0.5 ? -1.0 : 1.0) * (re_min + (re_max - re_min) * u(rng));
        block_start.push_back(i);
        if (i + 1 < n && u(rng) < 0.5) {
            const double b = 0.2 + 1.5 * u(rng);
            T(i, i) = T(i + 1, i + 1) = a;
            T(i, i + 1) = b;
            T(i + 1, i) = -b;
            out.eigenvalues.emplace_back(a, b);
            out.eigenvalues.emplace_back(a, -b);
            i += 2;
        } else {
            T(i, i) = a;
            out.eigenvalues.emplace_back(a, 0.0);
            i += 1;
        }
    }
    block_start.push_back(n);
    for (std::size_t b = 0; b + 1 < block_start.size(); ++b)
        for (int r = block_start[b]; r < block_start[b + 1]; ++r)
            for (int c = block_start[b + 1]; c < n; ++c) T(r, c) = 2.0 * u(rng) - 1.0;
    Vector s(n);
    for (int k = 0; k < n; ++k) s(k) = std::pow(2.0, 2.0 * u(rng) - 1.0);
    const Matrix P = random_orthogonal(n, rng) * s.asDiagonal() * random_orthogonal(n, rng);
    out.m = P * T * P.inverse();
    return out;
}

}  // namespace solvharm::testsupport
