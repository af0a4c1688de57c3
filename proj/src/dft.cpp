#include "decolemma/dft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>

#include "decolemma/errors.hpp"
#include "decolemma/parallel.hpp"
#include "decolemma/rlsum.hpp"

namespace decolemma {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpotCheckTolerance = 1e-10;
constexpr std::size_t kSpotChecks = 8;
constexpr std::size_t kMaxFftLength = std::size_t{1} << 24;

void check_times(std::span<const double> times) {
    for (std::size_t m = 0; m < times.size(); ++m) {
        if (!std::isfinite(times[m])) throw InvalidArgument("time " + std::to_string(m) + " is not finite");
        if (m > 0 && !(times[m] > times[m - 1]))
            throw InvalidArgument("times must be strictly increasing (index " + std::to_string(m) + ")");
    }
}

bool near_integer(double x, double rel_tol, long long& out) {
    const double r = std::nearbyint(x);
    if (std::abs(x - r) > rel_tol * std::max(1.0, std::abs(x))) return false;
    out = static_cast<long long>(r);
    return true;
}

struct FftwDeleter {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

std::vector<Complex> fft_sweep(const SampledFunction& sf, const CanonicalTimes& grid, std::size_t count) {
    const std::size_t m_len = grid.fft_length;
    const std::size_t n = sf.n_intervals();
    std::unique_ptr<fftw_complex[], FftwDeleter> buf(fftw_alloc_complex(m_len));
    std::fill_n(reinterpret_cast<double*>(buf.get()), 2 * m_len, 0.0);
    const auto f = sf.values();
    for (std::size_t j = 0; j <= n; ++j) {
        auto& slot = buf[j % m_len];
        slot[0] += f[j].real();
        slot[1] += f[j].imag();
    }
    // FFTW_BACKWARD uses exp(+2 pi i j k / M), the sign of R_D.
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(m_len), buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    std::vector<Complex> out(count);
    const auto big_m = static_cast<long long>(m_len);
    const double w = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < count; ++i) {
        long long idx = (grid.first_index + static_cast<long long>(i)) % big_m;
        if (idx < 0) idx += big_m;
        const auto& v = buf[static_cast<std::size_t>(idx)];
        out[i] = Complex(v[0], v[1]) * w;
    }
    return out;
}

}  // namespace

Complex dft_at(const SampledFunction& sf, double t) { return direct_sum(sf, t); }

std::optional<CanonicalTimes> detect_canonical(std::span<const double> times, std::size_t n_intervals) {
    if (times.size() < 2 || n_intervals == 0) return std::nullopt;
    const double step = times[1] - times[0];
    if (!(step > 0.0)) return std::nullopt;
    for (std::size_t m = 2; m < times.size(); ++m) {
        const double expected = times[0] + static_cast<double>(m) * step;
        if (std::abs(times[m] - expected) > 1e-12 * std::max(std::abs(expected), step)) return std::nullopt;
    }
    long long m_len = 0;
    long long first = 0;
    if (!near_integer(kTwoPi * static_cast<double>(n_intervals) / step, 1e-9, m_len)) return std::nullopt;
    if (!near_integer(times[0] / step, 1e-9, first)) return std::nullopt;
    if (m_len < 1 || static_cast<std::size_t>(m_len) > kMaxFftLength) return std::nullopt;
    return CanonicalTimes{static_cast<std::size_t>(m_len), first};
}

TimeSeries sweep_direct(const SampledFunction& sf, std::span<const double> times) {
    check_times(times);
    TimeSeries out{std::vector<double>(times.begin(), times.end()), std::vector<Complex>(times.size())};
    parallel_for(times.size(), [&](std::size_t m) { out.values[m] = direct_sum(sf, times[m]); });
    return out;
}

SweepResult sweep_detailed(const SampledFunction& sf, std::span<const double> times) {
    check_times(times);
    SweepResult result;
    const auto canonical = detect_canonical(times, sf.n_intervals());
    // The transform only pays off when it is not much longer than the direct work.
    const bool worthwhile = canonical && static_cast<double>(canonical->fft_length) <=
                                             4.0 * static_cast<double>(sf.size()) * static_cast<double>(times.size());
    if (worthwhile) {
        auto values = fft_sweep(sf, *canonical, times.size());
        std::mt19937_64 rng(0x5eedu);
        std::uniform_int_distribution<std::size_t> pick(0, times.size() - 1);
        const double scale = sf.l1_weight();
        bool ok = true;
        for (std::size_t c = 0; c < kSpotChecks && ok; ++c) {
            const std::size_t m = pick(rng);
            const Complex ref = direct_sum(sf, times[m]);
            const double denom = std::max(std::abs(ref), scale);
            ok = std::abs(values[m] - ref) <= kSpotCheckTolerance * denom;
        }
        if (ok) {
            result.series.times.assign(times.begin(), times.end());
            result.series.values = std::move(values);
            result.method = SweepMethod::fft;
            return result;
        }
        result.fast_path_rejected = true;
    }
    result.series = sweep_direct(sf, times);
    return result;
}

TimeSeries sweep(const SampledFunction& sf, std::span<const double> times) {
    return sweep_detailed(sf, times).series;
}

void write_csv(std::ostream& os, const TimeSeries& series) {
    const auto old_precision = os.precision(17);
    os << "t,re,im,abs\n";
    for (std::size_t m = 0; m < series.size(); ++m) {
        const auto& v = series.values[m];
        os << series.times[m] << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << '\n';
    }
    os.precision(old_precision);
}

}  // namespace decolemma
