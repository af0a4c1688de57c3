#pragma once

// Test-only oracles. These deliberately avoid the library's summation and
// phase code so they stay independent of the paths they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "decolemma/grid.hpp"

namespace decolemma::testing {

// Naive long-double evaluation of (1/N) sum f_j exp(i j t / N).
inline std::complex<double> oracle_sum(const std::vector<std::complex<double>>& f, double t) {
    const std::size_t n = f.size() - 1;
    long double re = 0.0L, im = 0.0L;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const long double th = static_cast<long double>(j) * static_cast<long double>(t) / static_cast<long double>(n);
        const long double c = std::cos(th), s = std::sin(th);
        re += f[j].real() * c - f[j].imag() * s;
        im += f[j].real() * s + f[j].imag() * c;
    }
    return {static_cast<double>(re / n), static_cast<double>(im / n)};
}

inline std::vector<std::complex<double>> random_complex(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::complex<double>> v(count);
    for (auto& z : v) z = {g(rng), g(rng)};
    return v;
}

inline std::vector<std::complex<double>> random_real(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::complex<double>> v(count);
    for (auto& z : v) z = {u(rng), 0.0};
    return v;
}

inline double l1_weight(const std::vector<std::complex<double>>& f) {
    long double s = 0.0L;
    for (const auto& z : f) s += std::abs(z);
    return static_cast<double>(s / (f.size() - 1));
}

// Brute-force flatness of the block partition with blocks of p+1 points.
inline double oracle_flatness(const std::vector<std::complex<double>>& f, std::size_t p) {
    double fmax = 0.0;
    for (const auto& z : f) fmax = std::max(fmax, std::abs(z));
    const double floor = 1e-12 * fmax;
    double worst = 0.0;
    for (std::size_t b = 0; b < f.size(); b += p + 1) {
        std::complex<long double> s = 0.0L;
        for (std::size_t j = b; j <= b + p; ++j) s += std::complex<long double>(f[j].real(), f[j].imag());
        const std::complex<double> mean(static_cast<double>(s.real() / (p + 1)), static_cast<double>(s.imag() / (p + 1)));
        const double scale = std::max(std::abs(mean), floor);
        for (std::size_t j = b; j <= b + p; ++j) {
            const double d = std::abs(f[j] - mean);
            if (d > 0.0) worst = std::max(worst, scale > 0.0 ? d / scale : INFINITY);
        }
    }
    return worst;
}

inline std::vector<std::complex<double>> gaussian_samples(std::size_t n_intervals) {
    std::vector<std::complex<double>> f(n_intervals + 1);
    for (std::size_t i = 0; i <= n_intervals; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n_intervals) - 0.5;
        f[i] = std::exp(-x * x / 0.125);
    }
    return f;
}

inline std::vector<std::complex<double>> alternating_samples(std::size_t n_intervals) {
    std::vector<std::complex<double>> f(n_intervals + 1);
    for (std::size_t i = 0; i <= n_intervals; ++i) f[i] = (i % 2 == 0) ? 1.0 : -1.0;
    return f;
}

}  // namespace decolemma::testing
