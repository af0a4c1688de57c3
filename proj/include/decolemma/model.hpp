#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decolemma/grid.hpp"
#include "decolemma/rlsum.hpp"

namespace decolemma {

/**
 * A discrete quantum model written in the energy eigenbasis: levels omega_i,
 * density-matrix coefficients rho(omega_i, omega_j), observable coefficients
 * O(omega_i, omega_j) and the action scale hbar.
 *
 * Construction validates Hermiticity of rho and O (1e-10, relative to the
 * largest entry), tr rho = 1 (1e-10) and strictly increasing energies.
 * Positivity of rho costs an eigendecomposition and is checked on demand.
 */
class DiscreteModel {
public:
    DiscreteModel(std::vector<double> energies, Eigen::MatrixXcd rho, Eigen::MatrixXcd observable, double hbar = 1.0);

    std::size_t levels() const noexcept { return energies_.size(); }
    std::span<const double> energies() const noexcept { return energies_; }
    const Eigen::MatrixXcd& rho() const noexcept { return rho_; }
    const Eigen::MatrixXcd& observable() const noexcept { return observable_; }
    double hbar() const noexcept { return hbar_; }

    // Smallest eigenvalue of rho. Refuses models above kMaxEigenLevels levels.
    double min_rho_eigenvalue() const;
    bool is_positive_semidefinite(double tolerance = 1e-8) const { return min_rho_eigenvalue() >= -tolerance; }

    static constexpr std::size_t kMaxEigenLevels = 2000;

private:
    std::vector<double> energies_;
    Eigen::MatrixXcd rho_;
    Eigen::MatrixXcd observable_;
    double hbar_;
};

// sum_{i,j} conj(rho_ij) O_ij exp(i (omega_i - omega_j) t / hbar) at physical
// time t, brute force. Throws HermiticityViolation if the imaginary residue
// exceeds 1e-8 of sum |conj(rho_ij) O_ij|.
double expectation(const DiscreteModel& model, double t);

// Diagonal part sum_i conj(rho_ii) O_ii: the value in the weak limit.
double equilibrium_value(const DiscreteModel& model);

/**
 * The kernel conj(rho_ij) O_ij binned by d = i - j > 0.
 *
 * bins[d-1] is the amplitude a_d of frequency d * gap. For an equidistant
 * spectrum the expectation value is exactly
 *     diagonal_part + 2 Re sum_d a_d exp(i d gap t / hbar).
 * The positive bins d = 1..N sit on the grid x = (d-1)/(N-1); `sampled` holds
 * them rescaled by (N-1)/M with M = sum_d |a_d|, so that the off-diagonal
 * deviation equals off_diagonal_mass * |R_D| up to a phase. `sampled` is
 * absent when fewer than two bins exist or when every bin vanishes.
 */
struct FrequencyProfile {
    std::vector<Complex> bins;
    Complex diagonal_part;
    double gap = 0.0;                // mean level spacing
    double off_diagonal_mass = 0.0;  // 2 sum_d |a_d|
    AffineEnergyMap frequency_map;   // frequencies d*gap onto [0, 1]; carries the time scale
    std::optional<SampledFunction> sampled;

    // diagonal_part + 2 Re sum_d a_d exp(i d gap t / hbar)
    double reconstruct(double t_physical) const;
    // Physical time of the exact recurrence of every frequency, 2 pi hbar / gap.
    double recurrence_time() const noexcept;
};

// Builds the profile and verifies the reconstruction against expectation()
// at 16 pseudo-random times within one recurrence (1e-10 relative).
FrequencyProfile frequency_profile(const DiscreteModel& model, double tolerance = kDefaultEquidistanceTolerance);

struct PhysicalWindow {
    double t_low = 0.0;
    double t_high = 0.0;
};

struct ModelPrediction {
    DecoherenceVerdict verdict;
    std::optional<PhysicalWindow> physical_window;
    double equilibrium = 0.0;
    double off_diagonal_mass = 0.0;
    // predicted_bound * off_diagonal_mass: bound on |<O>(t) - <O>_*| inside the window.
    double deviation_bound = 0.0;
    std::optional<double> recurrence_time;
};

ModelPrediction predict(const DiscreteModel& model, const LemmaParameters& params = {},
                        double equidistance_tolerance = kDefaultEquidistanceTolerance);

struct EvolutionReport {
    std::vector<double> times;
    std::vector<double> expectation;
    std::vector<double> deviation;  // expectation - equilibrium
    double equilibrium = 0.0;
    double initial_deviation = 0.0;  // at t = 0
    std::optional<double> max_deviation_in_window;
    // First time after the window (or after the first drop below half the
    // initial deviation, without a window) where |deviation| climbs back to
    // half its initial value.
    std::optional<double> revival_time;
};

EvolutionReport evolve_and_check(const DiscreteModel& model, std::span<const double> times,
                                 const std::optional<PhysicalWindow>& window);

// Built-in test models. Energies are i * gap with gap = 1.
namespace generators {

// rho = |+><+|, O = sigma_x: <O>(t) = cos(gap t / hbar).
DiscreteModel two_level(double gap = 1.0, double hbar = 1.0);
// Random populations, no coherences.
DiscreteModel diagonal(std::size_t levels, std::uint64_t seed, double hbar = 1.0);
// rho = A A^dagger / tr, O random Hermitian.
DiscreteModel random_hermitian(std::size_t levels, std::uint64_t seed, double hbar = 1.0);
/**
 * Pure state with Gaussian populations and random phases; the observable's
 * off-diagonals are shaped so that the binned kernel is the smooth envelope
 * a_d = exp(-x_d^2 / (2 width^2)) / (levels - 1), x_d = (d-1)/(levels-2).
 */
DiscreteModel gaussian_offdiag(std::size_t levels, std::uint64_t seed, double width = 1.5, double hbar = 1.0);

}  // namespace generators

}  // namespace decolemma
