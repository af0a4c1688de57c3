#include "decolemma/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "decolemma/dft.hpp"
#include "decolemma/errors.hpp"
#include "decolemma/io.hpp"
#include "decolemma/model.hpp"
#include "decolemma/quasicont.hpp"
#include "decolemma/rlsum.hpp"
#include "decolemma/version.hpp"

namespace decolemma::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct RunConfig {
    std::string command;
    std::string input;
    std::string output;
    std::string generate;
    std::size_t n = 1000;
    std::size_t levels = 0;  // 0: generator default
    std::uint64_t seed = 7;
    double hbar = 1.0;
    double width = 1.5;
    double t = 0.0;
    std::optional<double> t_min;
    std::optional<double> t_max;
    std::size_t t_samples = 0;  // 0: command default
    bool log_times = false;
    std::size_t fft_length = 0;
    double eta = 0.1;
    std::size_t min_p = kDefaultMinP;
    double kappa = 10.0;
    double epsilon = 0.1;
    std::size_t window_samples = 512;
    double tolerance = kDefaultEquidistanceTolerance;
    bool evolve = false;
};

// Raised for invalid combinations the option parser cannot catch.
struct UsageError : Error {
    using Error::Error;
};

void write_metadata(std::ostream& os, const std::vector<std::string>& args) {
    os << "# decolemma " << kVersion << '\n' << "# command:";
    for (const auto& a : args) os << ' ' << a;
    os << '\n';
}

SampledFunction generated_function(const RunConfig& cfg) {
    const UniformGrid grid(cfg.n);
    std::vector<Complex> v(grid.size());
    if (cfg.generate == "constant") {
        std::fill(v.begin(), v.end(), Complex(1.0, 0.0));
    } else if (cfg.generate == "alternating") {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
    } else if (cfg.generate == "gaussian") {
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double u = grid[i] - 0.5;
            v[i] = std::exp(-u * u / 0.125);
        }
    } else if (cfg.generate == "random") {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> g(0.0, 1.0);
        for (auto& z : v) z = Complex(g(rng), g(rng));
    } else {
        throw UsageError("unknown function generator '" + cfg.generate +
                         "' (constant, alternating, gaussian, random)");
    }
    return SampledFunction(grid, std::move(v));
}

SampledFunction load_function(const RunConfig& cfg) {
    if (!cfg.generate.empty()) return generated_function(cfg);
    if (cfg.input.empty()) throw UsageError("need --input or --generate");
    auto values = io::read_value_column(std::filesystem::path(cfg.input));
    if (values.size() < 2) throw InputError(cfg.input, 0, "need at least two values (one grid interval)");
    const UniformGrid grid(values.size() - 1);
    return SampledFunction(grid, std::move(values));
}

std::vector<double> requested_times(const RunConfig& cfg, std::size_t n_intervals) {
    const std::size_t samples = cfg.t_samples ? cfg.t_samples : 512;
    if (cfg.fft_length) {
        const double step = 2.0 * kPi * static_cast<double>(n_intervals) / static_cast<double>(cfg.fft_length);
        std::vector<double> t(samples);
        for (std::size_t m = 0; m < samples; ++m) t[m] = static_cast<double>(m) * step;
        return t;
    }
    const double lo = cfg.t_min.value_or(0.0);
    const double hi = cfg.t_max.value_or(kPi * static_cast<double>(n_intervals));
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) throw UsageError("need finite --t-min <= --t-max");
    if (hi == lo) return {lo};
    if (cfg.log_times) {
        if (!(lo > 0.0)) throw UsageError("--log-times needs --t-min > 0");
        return log_spaced(lo, hi, samples);
    }
    return linear_spaced(lo, hi, samples);
}

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InputError(path, 0, "cannot open output file");
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

void write_certificate(std::ostream& os, const DecompositionCertificate& cert) {
    os << "n_intervals: " << cert.n_intervals << '\n'
       << "g_components: " << cert.g_components << '\n'
       << "points_per_component: " << cert.points_per_component << '\n'
       << "flatness: " << cert.flatness << '\n'
       << "c_max: " << cert.c_max << '\n';
    for (std::size_t k = 1; k <= cert.g_components; ++k) {
        const auto c = cert.component_constants[k - 1];
        os << "component_" << k << ": " << c.real() << ',' << c.imag() << '\n';
    }
}

void write_verdict(std::ostream& os, const DecoherenceVerdict& v) {
    os << "status: " << to_string(v.status) << '\n' << "reason: " << v.reason << '\n';
    if (v.reason == "NotInL1Class") {
        os << "best_p: " << v.best_p << '\n' << "best_flatness: " << v.best_flatness << '\n';
    }
    if (v.window) {
        os << "window_low: " << v.window->t_low << '\n'
           << "window_high: " << v.window->t_high << '\n'
           << "kappa: " << v.window->kappa << '\n';
    }
    os << "predicted_bound: " << v.predicted_bound << '\n'
       << "observed_max: " << v.observed_max << '\n';
    if (v.window) os << "t_at_max: " << v.t_at_max << '\n';
}

int exit_code(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::decoheres: return kSuccess;
        case VerdictStatus::no_decoherence: return kNoDecoherence;
        case VerdictStatus::inconclusive: return kInconclusive;
    }
    return kInputError;
}

LemmaParameters lemma_parameters(const RunConfig& cfg) {
    LemmaParameters p;
    p.flatness_tol = cfg.eta;
    p.min_p = cfg.min_p;
    p.kappa = cfg.kappa;
    p.epsilon = cfg.epsilon;
    p.n_time_samples = cfg.window_samples;
    return p;
}

int cmd_sum(const RunConfig& cfg, const std::vector<std::string>& args, std::ostream& out, bool use_sweep) {
    const auto sf = load_function(cfg);
    const auto times = requested_times(cfg, sf.n_intervals());
    Sink sink(cfg.output, out);
    auto& os = sink.stream();
    write_metadata(os, args);
    os << "# n_intervals: " << sf.n_intervals() << '\n';
    if (use_sweep) {
        const auto res = sweep_detailed(sf, times);
        os << "# method: " << (res.method == SweepMethod::fft ? "fft" : "direct") << '\n';
        write_csv(os, res.series);
    } else {
        write_csv(os, sweep_direct(sf, times));
    }
    return kSuccess;
}

int cmd_analyze(const RunConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
    const auto sf = load_function(cfg);
    const auto verdict = lemma_verdict(sf, lemma_parameters(cfg));
    Sink sink(cfg.output, out);
    auto& os = sink.stream();
    os.precision(17);
    write_metadata(os, args);
    os << "eta: " << cfg.eta << '\n'
       << "min_p: " << cfg.min_p << '\n'
       << "epsilon: " << cfg.epsilon << '\n';
    const auto tp = poincare_times(sf.grid());
    os << "poincare_time_nominal: " << tp.nominal_tp << '\n' << "exact_recurrence: " << tp.exact_recurrence << '\n';
    write_verdict(os, verdict);
    if (verdict.certificate) write_certificate(os, *verdict.certificate);
    return exit_code(verdict.status);
}

int cmd_pairs(const RunConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
    if (!(cfg.t > 0.0)) throw UsageError("pairs needs --t > 0");
    const UniformGrid grid(cfg.n);
    const auto rep = delta_profile(grid, cfg.t);
    Sink sink(cfg.output, out);
    auto& os = sink.stream();
    os.precision(17);
    write_metadata(os, args);
    os << "# t: " << rep.t << '\n' << "# offset: " << rep.offset << '\n';
    if (rep.delta_min) os << "# delta_min: " << *rep.delta_min << '\n';
    os << "i,x_i,cos(x_i t),partner,delta_i\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << i << ',' << grid[i] << ',' << std::cos(static_cast<double>(i) * cfg.t / static_cast<double>(cfg.n))
           << ',';
        if (rep.partner[i]) os << *rep.partner[i];
        os << ',';
        if (rep.partner[i]) os << *rep.deltas[std::min(i, *rep.partner[i])];
        os << '\n';
    }
    os << "uncancelled:";
    for (auto i : rep.uncancelled) os << ' ' << i;
    os << '\n';
    return kSuccess;
}

DiscreteModel model_from_config(const RunConfig& cfg) {
    if (cfg.generate.empty()) {
        if (cfg.input.empty()) throw UsageError("need --input or --generate");
        return io::load_model(cfg.input);
    }
    if (cfg.generate == "gaussian-offdiag")
        return generators::gaussian_offdiag(cfg.levels ? cfg.levels : 201, cfg.seed, cfg.width, cfg.hbar);
    if (cfg.generate == "two-level") return generators::two_level(1.0, cfg.hbar);
    if (cfg.generate == "diagonal") return generators::diagonal(cfg.levels ? cfg.levels : 64, cfg.seed, cfg.hbar);
    if (cfg.generate == "random-hermitian")
        return generators::random_hermitian(cfg.levels ? cfg.levels : 16, cfg.seed, cfg.hbar);
    throw UsageError("unknown model generator '" + cfg.generate +
                     "' (gaussian-offdiag, two-level, diagonal, random-hermitian)");
}

int cmd_model(const RunConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
    const auto model = model_from_config(cfg);
    const auto pred = predict(model, lemma_parameters(cfg), cfg.tolerance);

    out.precision(17);
    write_metadata(out, args);
    out << "levels: " << model.levels() << '\n'
        << "hbar: " << model.hbar() << '\n'
        << "equilibrium_value: " << pred.equilibrium << '\n'
        << "off_diagonal_mass: " << pred.off_diagonal_mass << '\n';
    if (pred.off_diagonal_mass == 0.0) out << "note: zero off-diagonal mass, expectation is constant in time\n";
    if (pred.recurrence_time) out << "recurrence_time: " << *pred.recurrence_time << '\n';
    write_verdict(out, pred.verdict);
    if (pred.physical_window) {
        out << "physical_window_low: " << pred.physical_window->t_low << '\n'
            << "physical_window_high: " << pred.physical_window->t_high << '\n'
            << "deviation_bound: " << pred.deviation_bound << '\n';
    }
    if (pred.verdict.certificate) write_certificate(out, *pred.verdict.certificate);

    if (cfg.evolve) {
        const double horizon = pred.recurrence_time ? 1.25 * *pred.recurrence_time : 100.0 * model.hbar();
        const double t_hi = cfg.t_max.value_or(horizon);
        const double t_lo = cfg.t_min.value_or(0.0);
        if (!(t_hi > t_lo)) throw UsageError("need --t-min < --t-max for --evolve");
        const auto times = linear_spaced(t_lo, t_hi, cfg.t_samples ? cfg.t_samples : 2048);
        const auto rep = evolve_and_check(model, times, pred.physical_window);
        out << "initial_deviation: " << rep.initial_deviation << '\n';
        if (rep.max_deviation_in_window) out << "max_deviation_in_window: " << *rep.max_deviation_in_window << '\n';
        if (rep.revival_time) out << "revival_time: " << *rep.revival_time << '\n';

        Sink sink(cfg.output, out);
        auto& os = sink.stream();
        os.precision(17);
        if (!cfg.output.empty()) write_metadata(os, args);
        os << "t_phys,expectation,deviation\n";
        for (std::size_t m = 0; m < rep.times.size(); ++m)
            os << rep.times[m] << ',' << rep.expectation[m] << ',' << rep.deviation[m] << '\n';
    }
    return exit_code(pred.verdict.status);
}

void add_function_source(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--input", cfg.input, "CSV with one value per line (re or re,im)")->check(CLI::ExistingFile);
    sub->add_option("--generate", cfg.generate, "built-in function: constant, alternating, gaussian, random");
    sub->add_option("--n", cfg.n, "grid intervals N for generated functions")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "seed for random generators");
}

void add_time_range(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--t-min", cfg.t_min, "first dimensionless time (default 0)");
    sub->add_option("--t-max", cfg.t_max, "last dimensionless time (default pi N)");
    sub->add_option("--t-samples", cfg.t_samples, "number of times (default 512)")->check(CLI::PositiveNumber);
    sub->add_flag("--log-times", cfg.log_times, "log-spaced instead of linear times");
}

void add_lemma_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--eta", cfg.eta, "flatness tolerance (default 0.1)")->check(CLI::PositiveNumber);
    sub->add_option("--min-p", cfg.min_p, "smallest admissible component size P (default 8)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--kappa", cfg.kappa, "window start in units of pi (default 10)")->check(CLI::Range(1.0, 1e300));
    sub->add_option("--epsilon", cfg.epsilon, "per-component residual bound (default 0.1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--window-samples", cfg.window_samples, "log-spaced samples across the window (default 512)")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Decoherence prediction for discrete spectra via a discrete Riemann-Lebesgue criterion", "decolemma"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    auto* sum = app.add_subcommand("sum", "Emit R_D(t) as CSV");
    add_function_source(sum, cfg);
    add_time_range(sum, cfg);
    sum->add_option("--output", cfg.output, "write CSV here instead of stdout");

    auto* dft = app.add_subcommand("dft", "Batch evaluation of R_D, FFT-accelerated on canonical time grids");
    add_function_source(dft, cfg);
    add_time_range(dft, cfg);
    dft->add_option("--fft-length", cfg.fft_length, "use canonical times t_m = 2 pi N m / M")
        ->check(CLI::PositiveNumber);
    dft->add_option("--output", cfg.output, "write CSV here instead of stdout");

    auto* analyze = app.add_subcommand("analyze", "Decomposition certificate and decoherence verdict");
    add_function_source(analyze, cfg);
    add_lemma_options(analyze, cfg);
    analyze->add_option("--output", cfg.output, "write the report here instead of stdout");

    auto* pairs = app.add_subcommand("pairs", "Cancellation pairing of cosine terms at time t");
    pairs->add_option("--n", cfg.n, "grid intervals N")->required()->check(CLI::PositiveNumber);
    pairs->add_option("--t", cfg.t, "dimensionless time")->required();
    pairs->add_option("--output", cfg.output, "write the dump here instead of stdout");

    auto* model = app.add_subcommand("model", "Predict decoherence of a discrete quantum model");
    model->add_option("--input", cfg.input, "model description file")->check(CLI::ExistingFile);
    model->add_option("--generate", cfg.generate, "gaussian-offdiag, two-level, diagonal, random-hermitian");
    model->add_option("--levels", cfg.levels, "number of levels for generated models")->check(CLI::PositiveNumber);
    model->add_option("--seed", cfg.seed, "generator seed (default 7)");
    model->add_option("--hbar", cfg.hbar, "action scale (default 1)")->check(CLI::PositiveNumber);
    model->add_option("--width", cfg.width, "gaussian-offdiag envelope width (default 1.5)")
        ->check(CLI::PositiveNumber);
    model->add_option("--tolerance", cfg.tolerance, "relative equidistance tolerance (default 1e-9)")
        ->check(CLI::PositiveNumber);
    add_lemma_options(model, cfg);
    model->add_flag("--evolve", cfg.evolve, "also evolve the expectation value by brute force");
    model->add_option("--t-min", cfg.t_min, "first physical time for --evolve (default 0)");
    model->add_option("--t-max", cfg.t_max, "last physical time for --evolve (default 1.25 recurrences)");
    model->add_option("--t-samples", cfg.t_samples, "evolution samples (default 2048)")->check(CLI::PositiveNumber);
    model->add_option("--output", cfg.output, "write the evolution CSV here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "decolemma: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (sum->parsed()) return cmd_sum(cfg, args, out, false);
        if (dft->parsed()) return cmd_sum(cfg, args, out, true);
        if (analyze->parsed()) return cmd_analyze(cfg, args, out);
        if (pairs->parsed()) return cmd_pairs(cfg, args, out);
        if (model->parsed()) return cmd_model(cfg, args, out);
    } catch (const Error& e) {
        err << "decolemma: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "decolemma: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace decolemma::cli
