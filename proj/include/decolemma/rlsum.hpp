#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "decolemma/grid.hpp"
#include "decolemma/quasicont.hpp"

namespace decolemma {

// R_D(t) = sum_{j=0}^{N} (1/N) f(x_j) exp(i x_j t), compensated summation.
// N+1 terms of weight 1/N: R_D(0) of f == 1 is (N+1)/N, not 1.
Complex direct_sum(const SampledFunction& sf, double t);

// Cosine and sine halves of R_D(t). Each half is complex because f is;
// real and imaginary parts of f are carried separately.
struct TrigSplit {
    Complex cosine;  // (1/N) sum f(x_j) cos(x_j t)
    Complex sine;    // (1/N) sum f(x_j) sin(x_j t)

    Complex combined() const noexcept { return cosine + Complex(0.0, 1.0) * sine; }
};

TrigSplit trig_split(const SampledFunction& sf, double t);

struct CancellationPair {
    std::size_t i = 0;
    std::size_t k = 0;
    double delta = 0.0;  // x_k t - x_i t - pi
};

/**
 * Pairing of cosine terms that cancel at time t: index i is matched with the
 * grid point nearest to x_i + pi/t. Matching is greedy in ascending i, so
 * indices never appear in two pairs; whatever is left over is uncancelled.
 */
struct CancellationReport {
    double t = 0.0;
    std::size_t offset = 0;  // k - i for every pair, round(pi N / t)
    std::vector<CancellationPair> pairs;
    std::vector<std::size_t> uncancelled;
    std::optional<double> delta_min;                // delta of smallest magnitude over pairs
    std::vector<std::optional<double>> deltas;      // delta_i when x_i + pi/t lies on [0, 1]
    std::vector<std::optional<std::size_t>> partner;
};

CancellationReport delta_profile(const UniformGrid& grid, double t);

struct HalfPeriodResidual {
    std::size_t n = 0;
    double t = 0.0;               // (2n+1) pi
    std::size_t point_count = 0;  // ceil((N+1)/(2n+1))
    double r_pi = 0.0;
    double pi_over_t_bound = 0.0;  // pi / t
    double count_bound = 0.0;      // point_count / N
};

// Residual from the uncancelled half-period at t = (2n+1) pi.
// Throws WindowViolation when (2n+1) pi > pi N.
HalfPeriodResidual residual_half_period(const UniformGrid& grid, std::size_t n);

struct PoincareTimes {
    double nominal_tp = 0.0;        // 2 pi, the usual textbook period for integer frequencies
    double exact_recurrence = 0.0;  // 2 pi N, common period of every phase j t / N
};

PoincareTimes poincare_times(const UniformGrid& grid);

// R_D^(k)(t) = sum_{r=0}^{P} (1/P) exp(i x_{r_k} t) over component k (1-based).
Complex component_sum(const DecompositionCertificate& cert, std::size_t k, double t);

// sum_k (P/N) C_k R_D^(k)(t)
Complex recombined_sum(const DecompositionCertificate& cert, double t);

struct TimeWindow {
    double t_low = 0.0;   // kappa * pi
    double t_high = 0.0;  // pi * P
    double kappa = 1.0;
};

// [kappa pi, pi P]. Throws WindowEmpty when kappa > P.
TimeWindow decoherence_window(const DecompositionCertificate& cert, double kappa);

enum class VerdictStatus { decoheres, no_decoherence, inconclusive };

const char* to_string(VerdictStatus status) noexcept;

struct LemmaParameters {
    double flatness_tol = 0.1;  // eta
    std::size_t min_p = kDefaultMinP;
    double kappa = 10.0;
    double epsilon = 0.1;
    std::size_t n_time_samples = 512;
};

struct DecoherenceVerdict {
    VerdictStatus status = VerdictStatus::inconclusive;
    std::optional<TimeWindow> window;
    double predicted_bound = 0.0;  // C eps + eta C (N+1)/N
    double observed_max = 0.0;     // max |R_D| over the sampled window
    double t_at_max = 0.0;
    std::string reason;  // WithinBound, BoundExceeded, NotInL1Class, WindowEmpty
    std::optional<DecompositionCertificate> certificate;
    // Best candidate reported by a failed decomposition.
    std::size_t best_p = 0;
    double best_flatness = 0.0;
};

DecoherenceVerdict lemma_verdict(const SampledFunction& sf, const LemmaParameters& params = {});

// n points from lo to hi, geometric spacing, endpoints exact.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);
std::vector<double> linear_spaced(double lo, double hi, std::size_t n);

}  // namespace decolemma
