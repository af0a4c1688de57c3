#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace decolemma {

using Complex = std::complex<double>;

/**
 * Equidistant points x_i = i/N, i = 0..N, on [0, 1].
 *
 * Immutable. x_0 is exactly 0 and x_N exactly 1; interior points are the
 * correctly rounded quotients i/N.
 */
class UniformGrid {
public:
    explicit UniformGrid(std::size_t n_intervals);

    std::size_t n_intervals() const noexcept { return n_; }
    std::size_t size() const noexcept { return points_.size(); }
    double spacing() const noexcept { return 1.0 / static_cast<double>(n_); }
    double operator[](std::size_t i) const noexcept { return points_[i]; }
    std::span<const double> points() const noexcept { return points_; }

    friend bool operator==(const UniformGrid& a, const UniformGrid& b) noexcept { return a.n_ == b.n_; }

private:
    std::size_t n_;
    std::vector<double> points_;
};

UniformGrid make_uniform_grid(std::size_t n_intervals);

// Samples f(x_i), one complex value per grid point, all finite.
class SampledFunction {
public:
    SampledFunction(UniformGrid grid, std::vector<Complex> values);

    const UniformGrid& grid() const noexcept { return grid_; }
    std::span<const Complex> values() const noexcept { return values_; }
    Complex operator[](std::size_t i) const noexcept { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t n_intervals() const noexcept { return grid_.n_intervals(); }

    // max_i |f(x_i)|
    double max_abs() const noexcept;
    // (1/N) sum_i |f(x_i)|, the triangle bound on every R_D(t).
    double l1_weight() const noexcept;

private:
    UniformGrid grid_;
    std::vector<Complex> values_;
};

SampledFunction sample(const UniformGrid& grid, std::vector<Complex> values);
SampledFunction sample_real(const UniformGrid& grid, std::span<const double> values);

/**
 * Affine map from physical energies onto the unit interval: x = (omega - offset) * scale.
 *
 * Also converts between physical time and the dimensionless time in which
 * phases read x * t: t_dimensionless = t_physical / (scale * hbar).
 */
struct AffineEnergyMap {
    double scale = 1.0;
    double offset = 0.0;
    double hbar = 1.0;

    double to_unit(double omega) const noexcept { return (omega - offset) * scale; }
    double from_unit(double x) const noexcept { return offset + x / scale; }
    double dimensionless_time(double t_physical) const noexcept { return t_physical / (scale * hbar); }
    double physical_time(double t_dimensionless) const noexcept { return t_dimensionless * scale * hbar; }
};

inline constexpr double kDefaultEquidistanceTolerance = 1e-9;

// Maps a strictly increasing, equidistant (within `tolerance`, relative to the
// mean gap) energy list onto the grid with N = len - 1. Throws
// NonEquidistantSpectrum otherwise; spectra are never resampled.
std::pair<UniformGrid, AffineEnergyMap> grid_from_energies(std::span<const double> energies, double hbar,
                                                           double tolerance = kDefaultEquidistanceTolerance);

// Largest relative deviation of consecutive gaps from the mean gap.
double max_relative_gap_deviation(std::span<const double> energies);

}  // namespace decolemma
