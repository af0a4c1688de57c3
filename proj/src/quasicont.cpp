#include "decolemma/quasicont.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "decolemma/compensated_sum.hpp"
#include "decolemma/errors.hpp"

namespace decolemma {

namespace {

void check_block_size(std::size_t n_intervals, std::size_t p) {
    if (p == 0) throw InvalidArgument("component size P must be at least 1");
    if ((n_intervals + 1) % (p + 1) != 0)
        throw InvalidArgument("P+1=" + std::to_string(p + 1) + " does not divide N+1=" +
                              std::to_string(n_intervals + 1));
}

}  // namespace

DecompositionCertificate certificate_at(const SampledFunction& sf, std::size_t p) {
    const std::size_t n = sf.n_intervals();
    check_block_size(n, p);

    DecompositionCertificate cert;
    cert.n_intervals = n;
    cert.points_per_component = p;
    cert.g_components = (n + 1) / (p + 1);
    cert.floor = kFlatnessFloorRatio * sf.max_abs();
    cert.component_constants.reserve(cert.g_components);

    const auto values = sf.values();
    for (std::size_t k = 1; k <= cert.g_components; ++k) {
        const std::size_t lo = cert.first_index(k);
        const std::size_t hi = cert.last_index(k);
        CompensatedComplexSum sum;
        for (std::size_t j = lo; j <= hi; ++j) sum.add(values[j]);
        const Complex mean = sum.value() / static_cast<double>(p + 1);
        cert.component_constants.push_back(mean);
        cert.c_max = std::max(cert.c_max, std::abs(mean));

        const double scale = std::max(std::abs(mean), cert.floor);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double dev = std::abs(values[j] - mean);
            if (dev == 0.0) continue;
            // scale == 0 only when f vanishes identically; any deviation is then unbounded.
            const double rel = scale > 0.0 ? dev / scale : std::numeric_limits<double>::infinity();
            cert.flatness = std::max(cert.flatness, rel);
        }
    }
    return cert;
}

double flatness_at(const SampledFunction& sf, std::size_t p) { return certificate_at(sf, p).flatness; }

std::vector<std::size_t> admissible_component_sizes(std::size_t n_intervals, std::size_t min_p) {
    std::vector<std::size_t> out;
    const std::size_t m = n_intervals + 1;
    for (std::size_t d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        for (std::size_t divisor : {d, m / d}) {
            if (divisor >= 2 && divisor - 1 >= min_p) out.push_back(divisor - 1);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DecompositionCertificate decompose(const SampledFunction& sf, double flatness_tol, std::size_t min_p) {
    if (!(flatness_tol > 0.0)) throw InvalidArgument("flatness tolerance must be positive");
    if (min_p < 1) throw InvalidArgument("min_p must be at least 1");

    const auto candidates = admissible_component_sizes(sf.n_intervals(), min_p);
    std::size_t best_p = 0;
    double best_flatness = std::numeric_limits<double>::infinity();
    // Largest P first: the first admissible certificate is the answer.
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
        auto cert = certificate_at(sf, *it);
        if (cert.flatness <= flatness_tol) return cert;
        if (cert.flatness < best_flatness) {
            best_flatness = cert.flatness;
            best_p = *it;
        }
    }
    throw NotInL1Class(best_p, best_flatness);
}

std::size_t relabel_component(const DecompositionCertificate& cert, std::size_t k, std::size_t j) {
    if (k < 1 || k > cert.g_components)
        throw IndexOutOfComponent("component index " + std::to_string(k) + " outside 1.." +
                                  std::to_string(cert.g_components));
    if (j < cert.first_index(k) || j > cert.last_index(k))
        throw IndexOutOfComponent("index " + std::to_string(j) + " is not in component " + std::to_string(k));
    return j - cert.first_index(k);
}

std::size_t global_index(const DecompositionCertificate& cert, std::size_t k, std::size_t r) {
    if (k < 1 || k > cert.g_components || r > cert.points_per_component)
        throw IndexOutOfComponent("local index " + std::to_string(r) + " of component " + std::to_string(k) +
                                  " out of range");
    return cert.first_index(k) + r;
}

}  // namespace decolemma
