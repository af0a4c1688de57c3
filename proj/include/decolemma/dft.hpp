#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "decolemma/grid.hpp"

namespace decolemma {

// R_D sampled at increasing dimensionless times.
struct TimeSeries {
    std::vector<double> times;
    std::vector<Complex> values;

    std::size_t size() const noexcept { return times.size(); }
};

// Continuous-t transform f~(t) = sum_{j=0}^{N} (1/N) f(x_j) exp(i x_j t).
// Identical to direct_sum; kept as the entry point for transform properties.
Complex dft_at(const SampledFunction& sf, double t);

/**
 * Times of the form t_m = (m0 + m) * 2 pi N / M for an integer FFT length M.
 * On such a grid every phase j t_m / N is a multiple of 2 pi / M, so the
 * whole sweep is one length-M transform of f folded modulo M.
 */
struct CanonicalTimes {
    std::size_t fft_length = 0;  // M
    long long first_index = 0;   // m0
};

std::optional<CanonicalTimes> detect_canonical(std::span<const double> times, std::size_t n_intervals);

enum class SweepMethod { direct, fft };

struct SweepResult {
    TimeSeries series;
    SweepMethod method = SweepMethod::direct;
    bool fast_path_rejected = false;  // canonical grid found but the spot check failed
};

// Evaluates R_D at every time. Canonical grids go through an FFT that is
// spot-checked against direct evaluation at 8 times (1e-10 relative) before
// it is trusted; everything else is summed directly.
SweepResult sweep_detailed(const SampledFunction& sf, std::span<const double> times);
TimeSeries sweep(const SampledFunction& sf, std::span<const double> times);
TimeSeries sweep_direct(const SampledFunction& sf, std::span<const double> times);

// Header `t,re,im,abs`, 17 significant digits.
void write_csv(std::ostream& os, const TimeSeries& series);

}  // namespace decolemma
