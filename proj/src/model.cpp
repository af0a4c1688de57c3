#include "decolemma/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "decolemma/compensated_sum.hpp"
#include "decolemma/errors.hpp"
#include "decolemma/parallel.hpp"

namespace decolemma {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHermitianTolerance = 1e-10;
constexpr double kTraceTolerance = 1e-10;
constexpr double kRealityTolerance = 1e-8;
constexpr double kReconstructionTolerance = 1e-10;
constexpr std::size_t kReconstructionChecks = 16;

void check_hermitian(const Eigen::MatrixXcd& m, const char* name) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double residue = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (residue > kHermitianTolerance * scale)
        throw HermiticityViolation(std::string(name) + " is not Hermitian (residue " + std::to_string(residue) + ")");
}

// sum_{i,j} |conj(rho_ij) O_ij|, the natural magnitude of the double sum.
double kernel_magnitude(const DiscreteModel& model) {
    return model.rho().cwiseAbs().cwiseProduct(model.observable().cwiseAbs()).sum();
}

Complex expectation_complex(const DiscreteModel& model, double t) {
    const std::size_t k = model.levels();
    const auto energies = model.energies();
    std::vector<Complex> phases(k);
    for (std::size_t i = 0; i < k; ++i) phases[i] = std::polar(1.0, energies[i] * t / model.hbar());
    const auto& rho = model.rho();
    const auto& obs = model.observable();
    CompensatedComplexSum acc;
    for (std::size_t j = 0; j < k; ++j) {
        const Complex pj = std::conj(phases[j]);
        for (std::size_t i = 0; i < k; ++i) {
            const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            acc.add(std::conj(rho(ii, jj)) * obs(ii, jj) * phases[i] * pj);
        }
    }
    return acc.value();
}

}  // namespace

DiscreteModel::DiscreteModel(std::vector<double> energies, Eigen::MatrixXcd rho, Eigen::MatrixXcd observable,
                             double hbar)
    : energies_(std::move(energies)), rho_(std::move(rho)), observable_(std::move(observable)), hbar_(hbar) {
    const auto k = static_cast<Eigen::Index>(energies_.size());
    if (k < 1) throw InvalidArgument("model needs at least one level");
    if (rho_.rows() != k || rho_.cols() != k)
        throw LengthMismatch(energies_.size() * energies_.size(), static_cast<std::size_t>(rho_.size()));
    if (observable_.rows() != k || observable_.cols() != k)
        throw LengthMismatch(energies_.size() * energies_.size(), static_cast<std::size_t>(observable_.size()));
    if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw InvalidArgument("hbar must be positive and finite");
    for (std::size_t i = 0; i < energies_.size(); ++i) {
        if (!std::isfinite(energies_[i])) throw NonFiniteValue(i);
        if (i > 0 && !(energies_[i] > energies_[i - 1]))
            throw InvalidArgument("energies must be strictly increasing (index " + std::to_string(i) + ")");
    }
    if (!rho_.allFinite()) throw InvalidArgument("rho has non-finite entries");
    if (!observable_.allFinite()) throw InvalidArgument("observable has non-finite entries");
    check_hermitian(rho_, "rho");
    check_hermitian(observable_, "observable");
    const Complex tr = rho_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTolerance)
        throw InvalidArgument("rho must have unit trace (got " + std::to_string(tr.real()) + ")");
}

double DiscreteModel::min_rho_eigenvalue() const {
    if (levels() > kMaxEigenLevels)
        throw InvalidArgument("positivity check limited to " + std::to_string(kMaxEigenLevels) + " levels");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double expectation(const DiscreteModel& model, double t) {
    if (!std::isfinite(t)) throw InvalidArgument("time must be finite");
    const Complex z = expectation_complex(model, t);
    const double magnitude = kernel_magnitude(model);
    if (std::abs(z.imag()) > kRealityTolerance * std::max(magnitude, std::numeric_limits<double>::min()))
        throw HermiticityViolation("expectation value has imaginary residue " + std::to_string(z.imag()));
    return z.real();
}

double equilibrium_value(const DiscreteModel& model) {
    CompensatedComplexSum acc;
    for (Eigen::Index i = 0; i < model.rho().rows(); ++i)
        acc.add(std::conj(model.rho()(i, i)) * model.observable()(i, i));
    return acc.value().real();
}

double FrequencyProfile::reconstruct(double t_physical) const {
    CompensatedComplexSum acc;
    const double w = gap * t_physical / frequency_map.hbar;
    for (std::size_t d = 1; d <= bins.size(); ++d) acc.add(bins[d - 1] * std::polar(1.0, static_cast<double>(d) * w));
    return diagonal_part.real() + 2.0 * acc.value().real();
}

double FrequencyProfile::recurrence_time() const noexcept { return 2.0 * kPi * frequency_map.hbar / gap; }

FrequencyProfile frequency_profile(const DiscreteModel& model, double tolerance) {
    const auto k = model.levels();
    if (k < 2) throw InvalidArgument("frequency profile needs at least two levels");
    // Equidistance is all that matters here; the energy grid itself is not used further.
    grid_from_energies(model.energies(), model.hbar(), tolerance);

    FrequencyProfile prof;
    const auto energies = model.energies();
    prof.gap = (energies.back() - energies.front()) / static_cast<double>(k - 1);
    prof.bins.resize(k - 1);
    const auto& rho = model.rho();
    const auto& obs = model.observable();
    for (std::size_t d = 1; d < k; ++d) {
        CompensatedComplexSum acc;
        for (std::size_t j = 0; j + d < k; ++j) {
            const auto r = static_cast<Eigen::Index>(j + d), c = static_cast<Eigen::Index>(j);
            acc.add(std::conj(rho(r, c)) * obs(r, c));
        }
        prof.bins[d - 1] = acc.value();
    }
    CompensatedComplexSum diag;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(k); ++i) diag.add(std::conj(rho(i, i)) * obs(i, i));
    prof.diagonal_part = diag.value();

    CompensatedSum mass;
    for (const auto& a : prof.bins) mass.add(std::abs(a));
    prof.off_diagonal_mass = 2.0 * mass.value();

    // Bins d = 1..k-1 land on x = (d-1)/(k-2); the frequency span is (k-2) * gap.
    const std::size_t n_bins = prof.bins.size();
    prof.frequency_map.offset = prof.gap;
    prof.frequency_map.hbar = model.hbar();
    prof.frequency_map.scale = n_bins >= 2 ? 1.0 / (static_cast<double>(n_bins - 1) * prof.gap) : 1.0 / prof.gap;

    if (n_bins >= 2 && prof.off_diagonal_mass > 0.0) {
        const double norm = static_cast<double>(n_bins - 1) / (0.5 * prof.off_diagonal_mass);
        std::vector<Complex> values(n_bins);
        for (std::size_t m = 0; m < n_bins; ++m) values[m] = prof.bins[m] * norm;
        prof.sampled.emplace(UniformGrid(n_bins - 1), std::move(values));
    }

    // Self-check against the brute-force double sum.
    const double magnitude = kernel_magnitude(model);
    const double spacing_error = max_relative_gap_deviation(energies);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> pick(0.0, prof.recurrence_time());
    for (std::size_t c = 0; c < kReconstructionChecks; ++c) {
        const double t = pick(rng);
        const double direct = expectation(model, t);
        const double binned = prof.reconstruct(t);
        // Equidistance is only checked to `tolerance`; dephasing of d*gap against
        // the true gaps grows like spacing_error * span * t / hbar.
        const double phase_slack =
            spacing_error * (energies.back() - energies.front()) * t / model.hbar() * static_cast<double>(k);
        const double allowed = (kReconstructionTolerance + phase_slack) * std::max(magnitude, 1e-300);
        if (std::abs(direct - binned) > allowed)
            throw Error("frequency profile reconstruction failed at t=" + std::to_string(t) + " (error " +
                        std::to_string(std::abs(direct - binned)) + ")");
    }
    return prof;
}

ModelPrediction predict(const DiscreteModel& model, const LemmaParameters& params, double equidistance_tolerance) {
    ModelPrediction out;
    out.equilibrium = equilibrium_value(model);

    FrequencyProfile prof;
    try {
        prof = frequency_profile(model, equidistance_tolerance);
    } catch (const NonEquidistantSpectrum& e) {
        out.verdict.status = VerdictStatus::no_decoherence;
        out.verdict.reason = "NonEquidistantSpectrum";
        return out;
    }
    out.off_diagonal_mass = prof.off_diagonal_mass;
    out.recurrence_time = prof.recurrence_time();

    if (prof.off_diagonal_mass == 0.0) {
        // Nothing oscillates: the expectation already sits at its equilibrium for all t.
        const double inf = std::numeric_limits<double>::infinity();
        out.verdict.status = VerdictStatus::decoheres;
        out.verdict.reason = "ZeroOffDiagonalMass";
        out.verdict.window = TimeWindow{params.kappa * kPi, inf, params.kappa};
        out.physical_window = PhysicalWindow{prof.frequency_map.physical_time(params.kappa * kPi), inf};
        return out;
    }
    if (!prof.sampled) {
        // A single frequency cannot interfere destructively with anything.
        out.verdict.status = VerdictStatus::no_decoherence;
        out.verdict.reason = "WindowEmpty";
        return out;
    }

    out.verdict = lemma_verdict(*prof.sampled, params);
    out.deviation_bound = out.verdict.predicted_bound * prof.off_diagonal_mass;
    if (out.verdict.window) {
        out.physical_window = PhysicalWindow{prof.frequency_map.physical_time(out.verdict.window->t_low),
                                             prof.frequency_map.physical_time(out.verdict.window->t_high)};
    }
    return out;
}

EvolutionReport evolve_and_check(const DiscreteModel& model, std::span<const double> times,
                                 const std::optional<PhysicalWindow>& window) {
    EvolutionReport rep;
    rep.times.assign(times.begin(), times.end());
    rep.expectation.resize(times.size());
    rep.deviation.resize(times.size());
    rep.equilibrium = equilibrium_value(model);
    rep.initial_deviation = expectation(model, 0.0) - rep.equilibrium;

    parallel_for(times.size(), [&](std::size_t m) {
        rep.expectation[m] = expectation(model, times[m]);
        rep.deviation[m] = rep.expectation[m] - rep.equilibrium;
    });

    if (window) {
        for (std::size_t m = 0; m < times.size(); ++m) {
            if (times[m] < window->t_low || times[m] > window->t_high) continue;
            const double d = std::abs(rep.deviation[m]);
            rep.max_deviation_in_window = std::max(rep.max_deviation_in_window.value_or(0.0), d);
        }
    }

    const double threshold = 0.5 * std::abs(rep.initial_deviation);
    if (threshold > 0.0) {
        bool armed = false;
        for (std::size_t m = 0; m < times.size(); ++m) {
            const double d = std::abs(rep.deviation[m]);
            if (!armed) {
                armed = window ? times[m] > window->t_high : d < threshold;
                if (!armed) continue;
            }
            if (d >= threshold) {
                rep.revival_time = times[m];
                break;
            }
        }
    }
    return rep;
}

namespace generators {

namespace {

std::vector<double> ladder(std::size_t levels, double gap) {
    std::vector<double> e(levels);
    for (std::size_t i = 0; i < levels; ++i) e[i] = gap * static_cast<double>(i);
    return e;
}

Eigen::MatrixXcd random_hermitian_matrix(std::size_t levels, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const auto k = static_cast<Eigen::Index>(levels);
    Eigen::MatrixXcd m(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        m(i, i) = Complex(g(rng), 0.0);
        for (Eigen::Index j = 0; j < i; ++j) {
            m(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0);
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

}  // namespace

DiscreteModel two_level(double gap, double hbar) {
    Eigen::MatrixXcd rho(2, 2), obs(2, 2);
    rho << 0.5, 0.5, 0.5, 0.5;
    obs << 0.0, 1.0, 1.0, 0.0;
    return DiscreteModel(ladder(2, gap), rho, obs, hbar);
}

DiscreteModel diagonal(std::size_t levels, std::uint64_t seed, double hbar) {
    if (levels < 1) throw InvalidArgument("need at least one level");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto k = static_cast<Eigen::Index>(levels);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(k, k);
    CompensatedSum total;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double p = 0.1 + u(rng);
        rho(i, i) = p;
        total.add(p);
    }
    rho /= total.value();
    return DiscreteModel(ladder(levels, 1.0), rho, random_hermitian_matrix(levels, rng), hbar);
}

DiscreteModel random_hermitian(std::size_t levels, std::uint64_t seed, double hbar) {
    if (levels < 1) throw InvalidArgument("need at least one level");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    const auto k = static_cast<Eigen::Index>(levels);
    Eigen::MatrixXcd a(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return DiscreteModel(ladder(levels, 1.0), rho, random_hermitian_matrix(levels, rng), hbar);
}

DiscreteModel gaussian_offdiag(std::size_t levels, std::uint64_t seed, double width, double hbar) {
    if (levels < 3) throw InvalidArgument("gaussian-offdiag needs at least three levels");
    if (!(width > 0.0)) throw InvalidArgument("envelope width must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    const auto k = static_cast<Eigen::Index>(levels);

    const double center = 0.5 * static_cast<double>(levels - 1);
    const double sigma = 0.25 * static_cast<double>(levels);
    std::vector<double> pop(levels);
    double total = 0.0;
    for (std::size_t i = 0; i < levels; ++i) {
        const double u = (static_cast<double>(i) - center) / sigma;
        pop[i] = std::exp(-0.5 * u * u);
        total += pop[i];
    }
    Eigen::VectorXcd psi(k);
    for (Eigen::Index i = 0; i < k; ++i)
        psi(i) = std::polar(std::sqrt(pop[static_cast<std::size_t>(i)] / total), angle(rng));
    psi.normalize();
    Eigen::MatrixXcd rho = psi * psi.adjoint();

    Eigen::MatrixXcd obs = Eigen::MatrixXcd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        obs(i, i) = std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(levels));
    for (Eigen::Index d = 1; d < k; ++d) {
        const double x = static_cast<double>(d - 1) / static_cast<double>(levels - 2);
        const double target = std::exp(-0.5 * x * x / (width * width)) / static_cast<double>(levels - 1);
        double weight = 0.0;
        for (Eigen::Index j = 0; j + d < k; ++j) weight += std::norm(rho(j + d, j));
        for (Eigen::Index j = 0; j + d < k; ++j) {
            obs(j + d, j) = target * rho(j + d, j) / weight;
            obs(j, j + d) = std::conj(obs(j + d, j));
        }
    }
    return DiscreteModel(ladder(levels, 1.0), rho, obs, hbar);
}

}  // namespace generators

}  // namespace decolemma
