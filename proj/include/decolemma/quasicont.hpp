#pragma once

#include <cstddef>
#include <vector>

#include "decolemma/grid.hpp"

namespace decolemma {

// Relative scale guard: deviations are measured against
// max(|C_k|, kFlatnessFloorRatio * max_i |f(x_i)|).
inline constexpr double kFlatnessFloorRatio = 1e-12;
inline constexpr std::size_t kDefaultMinP = 8;

/**
 * A class-1 quasi-continuous decomposition of the grid into G consecutive
 * components X_1..X_G of P+1 points each, together with the per-component
 * constants C_k (component means) and the achieved flatness.
 *
 * Component k (1-based) covers global indices (k-1)(P+1) .. (k-1)(P+1)+P.
 * Every point x in X_k satisfies |f(x) - C_k| <= flatness * max(|C_k|, floor).
 */
struct DecompositionCertificate {
    std::size_t n_intervals = 0;  // N of the underlying grid
    std::size_t g_components = 0;
    std::size_t points_per_component = 0;  // P; each component holds P+1 points
    std::vector<Complex> component_constants;
    double flatness = 0.0;
    double c_max = 0.0;
    double floor = 0.0;

    std::size_t first_index(std::size_t k) const noexcept { return (k - 1) * (points_per_component + 1); }
    std::size_t last_index(std::size_t k) const noexcept { return first_index(k) + points_per_component; }
};

// Flatness achieved by the partition into blocks of p+1 points, with the
// component means as constants. Requires (p+1) | (N+1) and p >= 1.
double flatness_at(const SampledFunction& sf, std::size_t p);

// Certificate for one specific P; no admissibility check against a tolerance.
DecompositionCertificate certificate_at(const SampledFunction& sf, std::size_t p);

// Every P >= min_p with (P+1) dividing N+1, ascending.
std::vector<std::size_t> admissible_component_sizes(std::size_t n_intervals, std::size_t min_p);

/**
 * Searches the divisors of N+1 for the largest P >= min_p whose achieved
 * flatness is <= flatness_tol. Throws NotInL1Class when none qualifies.
 */
DecompositionCertificate decompose(const SampledFunction& sf, double flatness_tol,
                                   std::size_t min_p = kDefaultMinP);

/// Local index r_k in [0, P] of global index j inside component k (1-based).
std::size_t relabel_component(const DecompositionCertificate& cert, std::size_t k, std::size_t j);
/// Inverse of relabel_component.
std::size_t global_index(const DecompositionCertificate& cert, std::size_t k, std::size_t r);

}  // namespace decolemma
