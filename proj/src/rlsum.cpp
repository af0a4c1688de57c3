#include "decolemma/rlsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "decolemma/compensated_sum.hpp"
#include "decolemma/errors.hpp"
#include "decolemma/parallel.hpp"

namespace decolemma {

namespace {

constexpr double kPi = std::numbers::pi;

void check_time(double t) {
    if (!std::isfinite(t)) throw InvalidArgument("time must be finite");
}

// Phase x_j t for the grid i/N, formed as (j t)/N.
inline double phase(std::size_t j, std::size_t n, double t) noexcept {
    return static_cast<double>(j) * t / static_cast<double>(n);
}

}  // namespace

Complex direct_sum(const SampledFunction& sf, double t) {
    check_time(t);
    const std::size_t n = sf.n_intervals();
    const auto f = sf.values();
    CompensatedComplexSum acc;
    for (std::size_t j = 0; j <= n; ++j) acc.add(f[j] * std::polar(1.0, phase(j, n, t)));
    return acc.value() / static_cast<double>(n);
}

TrigSplit trig_split(const SampledFunction& sf, double t) {
    check_time(t);
    const std::size_t n = sf.n_intervals();
    const auto f = sf.values();
    CompensatedComplexSum c, s;
    for (std::size_t j = 0; j <= n; ++j) {
        const double th = phase(j, n, t);
        c.add(f[j] * std::cos(th));
        s.add(f[j] * std::sin(th));
    }
    const double w = 1.0 / static_cast<double>(n);
    return {c.value() * w, s.value() * w};
}

CancellationReport delta_profile(const UniformGrid& grid, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw InvalidArgument("cancellation analysis needs t > 0 (at t = 0 every delta equals -pi)");

    const std::size_t n = grid.n_intervals();
    const double shift = kPi * static_cast<double>(n) / t;  // pi/t in index units
    const auto m = static_cast<std::size_t>(std::llround(std::min(shift, static_cast<double>(n) + 1.0)));
    const double delta = static_cast<double>(m) * t / static_cast<double>(n) - kPi;

    CancellationReport rep;
    rep.t = t;
    rep.offset = m;
    rep.deltas.assign(n + 1, std::nullopt);
    rep.partner.assign(n + 1, std::nullopt);

    std::vector<bool> used(n + 1, false);
    for (std::size_t i = 0; i <= n; ++i) {
        // x_i + pi/t must stay on [0, 1]; the slack absorbs rounding of pi N / t.
        const bool has_target = static_cast<double>(i) + shift <= static_cast<double>(n) * (1.0 + 1e-12);
        if (!has_target || m == 0) continue;
        const std::size_t k = i + m;
        if (k > n) continue;
        rep.deltas[i] = delta;
        if (used[i] || used[k]) continue;
        used[i] = used[k] = true;
        rep.partner[i] = k;
        rep.partner[k] = i;
        rep.pairs.push_back({i, k, delta});
    }
    for (std::size_t i = 0; i <= n; ++i)
        if (!used[i]) rep.uncancelled.push_back(i);
    for (const auto& p : rep.pairs) {
        if (!rep.delta_min || std::abs(p.delta) < std::abs(*rep.delta_min)) rep.delta_min = p.delta;
    }
    return rep;
}

HalfPeriodResidual residual_half_period(const UniformGrid& grid, std::size_t n) {
    const std::size_t big_n = grid.n_intervals();
    const std::size_t odd = 2 * n + 1;
    if (odd > big_n)
        throw WindowViolation("t = " + std::to_string(odd) + " pi lies beyond the window end pi N = " +
                              std::to_string(big_n) + " pi");
    HalfPeriodResidual out;
    out.n = n;
    out.t = static_cast<double>(odd) * kPi;
    out.point_count = (big_n + 1 + odd - 1) / odd;
    CompensatedSum acc;
    for (std::size_t i = 0; i < out.point_count; ++i) acc.add(std::cos(phase(i, big_n, out.t)));
    out.r_pi = acc.value() / static_cast<double>(big_n);
    out.pi_over_t_bound = kPi / out.t;
    out.count_bound = static_cast<double>(out.point_count) / static_cast<double>(big_n);
    return out;
}

PoincareTimes poincare_times(const UniformGrid& grid) {
    return {2.0 * kPi, 2.0 * kPi * static_cast<double>(grid.n_intervals())};
}

Complex component_sum(const DecompositionCertificate& cert, std::size_t k, double t) {
    check_time(t);
    if (k < 1 || k > cert.g_components)
        throw IndexOutOfComponent("component index " + std::to_string(k) + " outside 1.." +
                                  std::to_string(cert.g_components));
    const std::size_t p = cert.points_per_component;
    CompensatedComplexSum acc;
    for (std::size_t j = cert.first_index(k); j <= cert.last_index(k); ++j)
        acc.add(std::polar(1.0, phase(j, cert.n_intervals, t)));
    return acc.value() / static_cast<double>(p);
}

Complex recombined_sum(const DecompositionCertificate& cert, double t) {
    const double weight = static_cast<double>(cert.points_per_component) / static_cast<double>(cert.n_intervals);
    CompensatedComplexSum acc;
    for (std::size_t k = 1; k <= cert.g_components; ++k)
        acc.add(weight * cert.component_constants[k - 1] * component_sum(cert, k, t));
    return acc.value();
}

TimeWindow decoherence_window(const DecompositionCertificate& cert, double kappa) {
    if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw InvalidArgument("kappa must be >= 1");
    const auto p = static_cast<double>(cert.points_per_component);
    if (kappa > p) throw WindowEmpty(kappa, cert.points_per_component);
    return {kappa * kPi, p * kPi, kappa};
}

const char* to_string(VerdictStatus status) noexcept {
    switch (status) {
        case VerdictStatus::decoheres: return "Decoheres";
        case VerdictStatus::no_decoherence: return "NoDecoherence";
        case VerdictStatus::inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("log spacing needs 0 < lo <= hi");
    if (n == 0) return {};
    if (n == 1) return {lo};
    std::vector<double> out(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> linear_spaced(double lo, double hi, std::size_t n) {
    if (!(hi >= lo)) throw InvalidArgument("linear spacing needs lo <= hi");
    if (n == 0) return {};
    if (n == 1) return {lo};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

DecoherenceVerdict lemma_verdict(const SampledFunction& sf, const LemmaParameters& params) {
    if (!(params.flatness_tol > 0.0)) throw InvalidArgument("eta must be positive");
    if (params.min_p < 1) throw InvalidArgument("min_p must be at least 1");
    if (!(params.kappa >= 1.0) || !std::isfinite(params.kappa)) throw InvalidArgument("kappa must be >= 1");
    if (!(params.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    if (params.n_time_samples < 2) throw InvalidArgument("need at least two time samples");

    DecoherenceVerdict v;
    const std::size_t n = sf.n_intervals();

    // No decomposition can have P > N, so a kappa beyond N rules out any window.
    if (params.kappa > static_cast<double>(n)) {
        v.status = VerdictStatus::no_decoherence;
        v.reason = "WindowEmpty";
        return v;
    }

    try {
        v.certificate = decompose(sf, params.flatness_tol, params.min_p);
    } catch (const NotInL1Class& e) {
        v.status = VerdictStatus::no_decoherence;
        v.reason = "NotInL1Class";
        v.best_p = e.best_p();
        v.best_flatness = e.best_flatness();
        return v;
    }
    const auto& cert = *v.certificate;
    try {
        v.window = decoherence_window(cert, params.kappa);
    } catch (const WindowEmpty&) {
        v.status = VerdictStatus::no_decoherence;
        v.reason = "WindowEmpty";
        return v;
    }

    const auto times = log_spaced(v.window->t_low, v.window->t_high, params.n_time_samples);
    std::vector<double> mags(times.size());
    parallel_for(times.size(), [&](std::size_t m) { mags[m] = std::abs(direct_sum(sf, times[m])); });
    const auto worst = std::max_element(mags.begin(), mags.end());
    v.observed_max = *worst;
    v.t_at_max = times[static_cast<std::size_t>(worst - mags.begin())];

    const double c = cert.c_max;
    const double weight_excess = static_cast<double>(n + 1) / static_cast<double>(n);
    v.predicted_bound = c * params.epsilon + params.flatness_tol * c * weight_excess;

    if (v.observed_max <= v.predicted_bound) {
        v.status = VerdictStatus::decoheres;
        v.reason = "WithinBound";
    } else {
        v.status = VerdictStatus::inconclusive;
        v.reason = "BoundExceeded";
    }
    return v;
}

}  // namespace decolemma
