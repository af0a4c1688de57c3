#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "decolemma/errors.hpp"
#include "decolemma/quasicont.hpp"
#include "decolemma/rlsum.hpp"
#include "test_support.hpp"

using namespace decolemma;
namespace oracle = decolemma::testing;

namespace {

constexpr double kPi = std::numbers::pi;

SampledFunction on_grid(const std::vector<Complex>& f) { return sample(make_uniform_grid(f.size() - 1), f); }

// |(1/N) sum_{j=0}^{N} e^{i j t/N}| from the geometric-series closed form.
double constant_closed_form(std::size_t n, double t) {
    const long double h = static_cast<long double>(t) / (2.0L * n);
    const long double num = std::sin(h * (n + 1));
    const long double den = std::sin(h);
    return static_cast<double>(std::fabs(num / den) / n);
}

}  // namespace

TEST_CASE("direct sum agrees with a long-double oracle") {
    std::mt19937_64 rng(5);
    for (std::size_t n : {1u, 2u, 16u, 255u, 1000u, 4095u}) {
        const auto f = oracle::random_complex(n + 1, n);
        const auto sf = on_grid(f);
        const double scale = oracle::l1_weight(f);
        std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi * n);
        for (int s = 0; s < 20; ++s) {
            const double t = ut(rng);
            CHECK(std::abs(direct_sum(sf, t) - oracle::oracle_sum(f, t)) <= 1e-13 * scale * std::sqrt(n + 1.0));
        }
    }
}

TEST_CASE("zero time sums the samples with weight 1/N") {
    const auto sf = on_grid(std::vector<Complex>(11, 1.0));
    CHECK(direct_sum(sf, 0.0) == Complex(1.1, 0.0));
}

TEST_CASE("constant function matches the geometric closed form") {
    const std::size_t n = 1000;
    const auto sf = on_grid(std::vector<Complex>(n + 1, 1.0));
    for (double t : log_spaced(0.5, 2000.0 * kPi - 1.0, 300))
        CHECK(std::abs(direct_sum(sf, t)) == doctest::Approx(constant_closed_form(n, t)).epsilon(1e-10).scale(1e-3));
    // endpoint of the window: exactly 1/N
    CHECK(std::abs(direct_sum(sf, kPi * n)) == doctest::Approx(0.001).epsilon(1e-12));
}

TEST_CASE("triangle bound and conjugate symmetry") {
    const auto f = oracle::random_real(257, 4);
    const auto sf = on_grid(f);
    const double l1 = oracle::l1_weight(f);
    for (double t : linear_spaced(-500.0, 500.0, 101)) {
        const Complex a = direct_sum(sf, t), b = direct_sum(sf, -t);
        CHECK(std::abs(a) <= l1 * (1.0 + 1e-14));
        // real samples: R(-t) = conj R(t), each term exactly conjugated
        CHECK(std::abs(a - std::conj(b)) <= 1e-15 * l1);
    }
}

TEST_CASE("linearity") {
    const auto f = oracle::random_complex(101, 1), g = oracle::random_complex(101, 2);
    const Complex a(0.3, -1.2), b(2.0, 0.5);
    std::vector<Complex> h(101);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = a * f[i] + b * g[i];
    for (double t : {0.0, 1.0, 17.5, 314.0}) {
        const Complex lhs = direct_sum(on_grid(h), t);
        const Complex rhs = a * direct_sum(on_grid(f), t) + b * direct_sum(on_grid(g), t);
        CHECK(std::abs(lhs - rhs) <= 1e-13);
    }
}

TEST_CASE("trig split recombines through the Euler identity") {
    const auto f = oracle::random_complex(300, 8);
    const auto sf = on_grid(f);
    for (double t : {0.1, 3.0, 99.0, 897.0}) {
        const auto split = trig_split(sf, t);
        CHECK(std::abs(split.combined() - direct_sum(sf, t)) <= 1e-13);
    }
}

TEST_CASE("exact recurrence at 2 pi N") {
    for (std::size_t n : {16u, 255u, 1000u}) {
        const auto f = oracle::random_complex(n + 1, 77 + n);
        const auto sf = on_grid(f);
        const auto pt = poincare_times(sf.grid());
        CHECK(pt.nominal_tp == doctest::Approx(2.0 * kPi));
        CHECK(pt.exact_recurrence == doctest::Approx(2.0 * kPi * n));
        CHECK(std::abs(direct_sum(sf, pt.exact_recurrence) - direct_sum(sf, 0.0)) <= 1e-9 * oracle::l1_weight(f));
    }
}

TEST_CASE("delta profile at a commensurate time") {
    const auto rep = delta_profile(make_uniform_grid(16), 2.0 * kPi);
    CHECK(rep.offset == 8);
    REQUIRE(rep.pairs.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(rep.pairs[i].i == i);
        CHECK(rep.pairs[i].k == i + 8);
        CHECK(rep.pairs[i].delta == 0.0);
    }
    CHECK(rep.uncancelled == std::vector<std::size_t>{16});
    REQUIRE(rep.delta_min);
    CHECK(*rep.delta_min == 0.0);
}

TEST_CASE("delta profile at a non-commensurate time") {
    SUBCASE("N=15, t=2.4 pi") {
        const auto rep = delta_profile(make_uniform_grid(15), 2.4 * kPi);
        CHECK(rep.offset == 6);
        REQUIRE(rep.pairs.size() == 6);
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(rep.pairs[i].i == i);
            CHECK(rep.pairs[i].k == i + 6);
        }
        CHECK(rep.uncancelled == std::vector<std::size_t>{12, 13, 14, 15});
    }
    SUBCASE("N=16, t=3 pi") {
        const auto rep = delta_profile(make_uniform_grid(16), 3.0 * kPi);
        CHECK(rep.offset == 5);
        CHECK(rep.uncancelled == std::vector<std::size_t>{11, 12, 13, 14, 16});
        REQUIRE(rep.delta_min);
        CHECK(std::abs(*rep.delta_min) == doctest::Approx(0.1963495408493620774).epsilon(1e-13));
    }
}

TEST_CASE("delta profile matches a brute-force nearest-point search") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> un(4, 300);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = un(rng);
        std::uniform_real_distribution<double> ut(0.5, kPi * n);
        const double t = ut(rng);
        const auto rep = delta_profile(make_uniform_grid(n), t);

        // offset: the k - i minimizing |(k-i) t/N - pi|
        std::size_t best = 0;
        double best_err = INFINITY;
        for (std::size_t d = 0; d <= n + 1; ++d) {
            const double err = std::abs(static_cast<double>(d) * t / static_cast<double>(n) - kPi);
            if (err < best_err) best_err = err, best = d;
        }
        if (best == 0 || best > n) continue;
        CHECK(rep.offset == best);

        // pairs are disjoint, each index appears at most once, partners agree
        std::vector<int> seen(n + 1, 0);
        for (const auto& p : rep.pairs) {
            CHECK(p.k == p.i + rep.offset);
            ++seen[p.i];
            ++seen[p.k];
            CHECK(std::abs(p.delta) == doctest::Approx(best_err).epsilon(1e-9).scale(1e-12));
        }
        for (std::size_t i = 0; i <= n; ++i) CHECK(seen[i] <= 1);
        std::size_t lonely = 0;
        for (std::size_t i = 0; i <= n; ++i) lonely += seen[i] == 0;
        CHECK(rep.uncancelled.size() == lonely);
        CHECK(2 * rep.pairs.size() + rep.uncancelled.size() == n + 1);
    }
}

TEST_CASE("delta profile rejects non-positive times") {
    CHECK_THROWS_AS(delta_profile(make_uniform_grid(16), 0.0), InvalidArgument);
    CHECK_THROWS_AS(delta_profile(make_uniform_grid(16), -1.0), InvalidArgument);
}

TEST_CASE("half-period residual values") {
    // 50-digit reference values
    const auto r14 = residual_half_period(make_uniform_grid(14), 1);
    CHECK(r14.point_count == 5);
    CHECK(r14.r_pi == doctest::Approx(0.047821414957454783306).epsilon(1e-13));
    CHECK(r14.count_bound == doctest::Approx(5.0 / 14.0));

    const auto g = make_uniform_grid(999);
    struct Case {
        std::size_t n, count;
        double r_pi;
    };
    for (const Case c : {Case{1, 334, 0.0}, Case{4, 112, 0.0}, Case{49, 11, 0.00009045227644572731272}}) {
        const auto r = residual_half_period(g, c.n);
        CHECK(r.point_count == c.count);
        CHECK(r.t == doctest::Approx((2.0 * c.n + 1.0) * kPi));
        CHECK(std::abs(r.r_pi - c.r_pi) <= 1e-14);
        CHECK(std::abs(r.r_pi) <= r.count_bound);
        CHECK(std::abs(r.pi_over_t_bound - 1.0 / (2.0 * c.n + 1.0)) <= 1e-12);
    }
    CHECK_THROWS_AS(residual_half_period(make_uniform_grid(10), 5), WindowViolation);
}

TEST_CASE("recombination reproduces the direct sum for piecewise-constant f") {
    std::vector<Complex> f(1024);
    const auto c = oracle::random_complex(8, 31);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = c[i / 128];
    const auto sf = on_grid(f);
    const auto cert = certificate_at(sf, 127);
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi * 1023);
    for (int s = 0; s < 64; ++s) {
        const double t = ut(rng);
        const Complex d = direct_sum(sf, t);
        CHECK(std::abs(recombined_sum(cert, t) - d) <= 1e-12 * std::max(std::abs(d), oracle::l1_weight(f)));
    }
    // component sums carry weight 1/P over P+1 points
    CHECK(component_sum(cert, 1, 0.0) == Complex(128.0 / 127.0, 0.0));
    CHECK_THROWS_AS(component_sum(cert, 9, 0.0), IndexOutOfComponent);
}

TEST_CASE("decoherence window") {
    std::vector<Complex> f(1024, 1.0);
    const auto cert = certificate_at(on_grid(f), 63);
    const auto w = decoherence_window(cert, 10.0);
    CHECK(w.t_low == doctest::Approx(10.0 * kPi));
    CHECK(w.t_high == doctest::Approx(63.0 * kPi));
    CHECK_THROWS_AS(decoherence_window(cert, 64.0), WindowEmpty);
}

TEST_CASE("lemma verdicts") {
    SUBCASE("constant f decoheres on a large grid") {
        const auto v = lemma_verdict(on_grid(std::vector<Complex>(1001, 1.0)));
        CHECK(v.status == VerdictStatus::decoheres);
        CHECK(v.reason == "WithinBound");
        REQUIRE(v.window);
        CHECK(v.window->t_high == doctest::Approx(1000.0 * kPi));
        CHECK(v.observed_max <= v.predicted_bound);
        CHECK(v.predicted_bound == doctest::Approx(0.1 + 0.1 * 1001.0 / 1000.0));
    }
    SUBCASE("alternating f is not in the class") {
        const auto v = lemma_verdict(on_grid(oracle::alternating_samples(1023)));
        CHECK(v.status == VerdictStatus::no_decoherence);
        CHECK(v.reason == "NotInL1Class");
        CHECK_FALSE(v.window);
    }
    SUBCASE("kappa beyond the grid") {
        LemmaParameters p;
        p.kappa = 10.0;
        const auto v = lemma_verdict(on_grid(std::vector<Complex>(9, 1.0)), p);
        CHECK(v.status == VerdictStatus::no_decoherence);
        CHECK(v.reason == "WindowEmpty");
    }
    SUBCASE("kappa beyond the chosen P") {
        LemmaParameters p;
        p.kappa = 20.0;
        p.min_p = 8;
        // blocks of 16 are flat, nothing larger is
        std::vector<Complex> f(64);
        for (std::size_t i = 0; i < 64; ++i) f[i] = (i / 16) % 2 ? 1.0 : 3.0;
        const auto v = lemma_verdict(on_grid(f), p);
        CHECK(v.reason == "WindowEmpty");
        CHECK(v.certificate);
    }
    SUBCASE("a tiny epsilon makes the bound fail") {
        LemmaParameters p;
        p.epsilon = 1e-9;
        p.flatness_tol = 1e-9;
        p.kappa = 1.0;
        const auto v = lemma_verdict(on_grid(std::vector<Complex>(1001, 1.0)), p);
        CHECK(v.status == VerdictStatus::inconclusive);
        CHECK(v.reason == "BoundExceeded");
        CHECK(v.observed_max > v.predicted_bound);
    }
    SUBCASE("status strings") {
        CHECK(std::string(to_string(VerdictStatus::decoheres)) == "Decoheres");
        CHECK(std::string(to_string(VerdictStatus::no_decoherence)) == "NoDecoherence");
        CHECK(std::string(to_string(VerdictStatus::inconclusive)) == "Inconclusive");
    }
}

TEST_CASE("spacing helpers keep exact endpoints") {
    const auto l = log_spaced(10.0 * kPi, 1000.0 * kPi, 512);
    CHECK(l.size() == 512);
    CHECK(l.front() == 10.0 * kPi);
    CHECK(l.back() == 1000.0 * kPi);
    for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i] > l[i - 1]);
    const auto lin = linear_spaced(0.0, 1.0, 5);
    CHECK(lin == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}
