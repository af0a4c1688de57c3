#include "decolemma/grid.hpp"

#include <algorithm>
#include <cmath>

#include "decolemma/compensated_sum.hpp"
#include "decolemma/errors.hpp"

namespace decolemma {

UniformGrid::UniformGrid(std::size_t n_intervals) : n_(n_intervals) {
    if (n_intervals == 0) throw InvalidArgument("grid needs at least one interval");
    points_.resize(n_ + 1);
    const double n = static_cast<double>(n_);
    for (std::size_t i = 0; i <= n_; ++i) points_[i] = static_cast<double>(i) / n;
}

UniformGrid make_uniform_grid(std::size_t n_intervals) { return UniformGrid(n_intervals); }

SampledFunction::SampledFunction(UniformGrid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw LengthMismatch(grid_.size(), values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) throw NonFiniteValue(i);
    }
}

double SampledFunction::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

double SampledFunction::l1_weight() const noexcept {
    CompensatedSum s;
    for (const auto& v : values_) s.add(std::abs(v));
    return s.value() / static_cast<double>(grid_.n_intervals());
}

SampledFunction sample(const UniformGrid& grid, std::vector<Complex> values) {
    return SampledFunction(grid, std::move(values));
}

SampledFunction sample_real(const UniformGrid& grid, std::span<const double> values) {
    return SampledFunction(grid, std::vector<Complex>(values.begin(), values.end()));
}

double max_relative_gap_deviation(std::span<const double> energies) {
    if (energies.size() < 2) return 0.0;
    const double mean_gap = (energies.back() - energies.front()) / static_cast<double>(energies.size() - 1);
    double worst = 0.0;
    for (std::size_t i = 1; i < energies.size(); ++i) {
        const double gap = energies[i] - energies[i - 1];
        worst = std::max(worst, std::abs(gap - mean_gap) / std::abs(mean_gap));
    }
    return worst;
}

std::pair<UniformGrid, AffineEnergyMap> grid_from_energies(std::span<const double> energies, double hbar,
                                                           double tolerance) {
    if (energies.size() < 2) throw InvalidArgument("need at least two energies");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive and finite");
    if (!(tolerance > 0.0)) throw InvalidArgument("equidistance tolerance must be positive");
    for (std::size_t i = 0; i < energies.size(); ++i) {
        if (!std::isfinite(energies[i])) throw NonFiniteValue(i);
        if (i > 0 && !(energies[i] > energies[i - 1]))
            throw InvalidArgument("energies must be strictly increasing (index " + std::to_string(i) + ")");
    }
    const double deviation = max_relative_gap_deviation(energies);
    if (deviation > tolerance) throw NonEquidistantSpectrum(deviation);

    const std::size_t n = energies.size() - 1;
    AffineEnergyMap map;
    map.offset = energies.front();
    map.scale = 1.0 / (energies.back() - energies.front());
    map.hbar = hbar;
    return {UniformGrid(n), map};
}

}  // namespace decolemma
