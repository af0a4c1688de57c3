#include <doctest.h>

#include <cmath>
#include <numbers>

#include "decolemma/errors.hpp"
#include "decolemma/model.hpp"
#include "decolemma/rlsum.hpp"

using namespace decolemma;

namespace {

constexpr double kPi = std::numbers::pi;

// Expectation from the Schrodinger picture: tr(rho(t) O) with rho(t) = U rho U^dagger.
double schrodinger_expectation(const DiscreteModel& m, double t) {
    const auto k = static_cast<Eigen::Index>(m.levels());
    Eigen::VectorXcd u(k);
    for (Eigen::Index i = 0; i < k; ++i) u(i) = std::polar(1.0, -m.energies()[static_cast<std::size_t>(i)] * t / m.hbar());
    const Eigen::MatrixXcd rt = u.asDiagonal() * m.rho() * u.conjugate().asDiagonal();
    return (rt * m.observable()).trace().real();
}

}  // namespace

TEST_CASE("model construction validates its inputs") {
    Eigen::MatrixXcd rho(2, 2), obs(2, 2);
    rho << 0.5, 0.5, 0.5, 0.5;
    obs << 0.0, 1.0, 1.0, 0.0;
    CHECK_NOTHROW(DiscreteModel({0.0, 1.0}, rho, obs));
    CHECK_THROWS_AS(DiscreteModel({0.0}, rho, obs), LengthMismatch);
    CHECK_THROWS_AS(DiscreteModel({1.0, 0.0}, rho, obs), InvalidArgument);
    CHECK_THROWS_AS(DiscreteModel({0.0, 1.0}, rho, obs, 0.0), InvalidArgument);

    Eigen::MatrixXcd bad = obs;
    bad(0, 1) = Complex(1.0, 0.5);
    CHECK_THROWS_AS(DiscreteModel({0.0, 1.0}, rho, bad), HermiticityViolation);

    Eigen::MatrixXcd heavy = rho * 2.0;
    CHECK_THROWS_AS(DiscreteModel({0.0, 1.0}, heavy, obs), InvalidArgument);
}

TEST_CASE("expectation agrees with Schrodinger-picture evolution") {
    const auto m = generators::random_hermitian(12, 3);
    CHECK(m.is_positive_semidefinite());
    for (double t : {0.0, 0.3, 1.7, 12.0, 101.5})
        CHECK(expectation(m, t) == doctest::Approx(schrodinger_expectation(m, t)).epsilon(1e-11).scale(1.0));
}

TEST_CASE("two-level model oscillates without damping") {
    const auto m = generators::two_level();
    for (double t : {0.0, 0.5, 3.0, 100.0}) CHECK(expectation(m, t) == doctest::Approx(std::cos(t)).scale(1.0));
    CHECK(equilibrium_value(m) == doctest::Approx(0.0).scale(1.0));
    const auto p = predict(m);
    CHECK(p.verdict.status == VerdictStatus::no_decoherence);
    CHECK(p.verdict.reason == "WindowEmpty");
}

TEST_CASE("expectation recurs after 2 pi hbar / gap") {
    const auto m = generators::random_hermitian(20, 5, 0.7);
    const auto prof = frequency_profile(m);
    CHECK(prof.recurrence_time() == doctest::Approx(2.0 * kPi * 0.7));
    for (double t : {0.0, 0.9, 2.2})
        CHECK(expectation(m, t + prof.recurrence_time()) == doctest::Approx(expectation(m, t)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("frequency profile reconstructs the expectation") {
    const auto m = generators::random_hermitian(30, 17);
    const auto prof = frequency_profile(m);
    CHECK(prof.bins.size() == 29);
    CHECK(prof.diagonal_part.real() == doctest::Approx(equilibrium_value(m)));
    for (double t : {0.0, 0.4, 5.5, 60.0})
        CHECK(prof.reconstruct(t) == doctest::Approx(expectation(m, t)).epsilon(1e-11).scale(1.0));
    // initial off-diagonal deviation never exceeds the mass
    CHECK(std::abs(expectation(m, 0.0) - equilibrium_value(m)) <= prof.off_diagonal_mass * (1.0 + 1e-12));
}

TEST_CASE("deviation is mass times the sampled transform") {
    const auto m = generators::gaussian_offdiag(41, 3);
    const auto prof = frequency_profile(m);
    REQUIRE(prof.sampled);
    const double eq = equilibrium_value(m);
    for (double t : {0.05, 0.3, 1.0, 2.5}) {
        const double tau = prof.frequency_map.dimensionless_time(t);
        const double dev = expectation(m, t) - eq;
        CHECK(std::abs(dev) <= prof.off_diagonal_mass * std::abs(direct_sum(*prof.sampled, tau)) * (1.0 + 1e-9) + 1e-14);
    }
}

TEST_CASE("gaussian-offdiag binned kernel is the requested envelope") {
    const std::size_t k = 51;
    const double width = 1.5;
    const auto m = generators::gaussian_offdiag(k, 8, width);
    const auto prof = frequency_profile(m);
    for (std::size_t d = 1; d < k; ++d) {
        const double x = static_cast<double>(d - 1) / static_cast<double>(k - 2);
        const double want = std::exp(-x * x / (2.0 * width * width)) / static_cast<double>(k - 1);
        CHECK(std::abs(prof.bins[d - 1] - Complex(want, 0.0)) <= 1e-13);
    }
    CHECK(m.is_positive_semidefinite());
}

TEST_CASE("diagonal states are already at equilibrium") {
    const auto m = generators::diagonal(64, 7);
    CHECK(m.rho().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    const auto p = predict(m);
    CHECK(p.verdict.status == VerdictStatus::decoheres);
    CHECK(p.verdict.reason == "ZeroOffDiagonalMass");
    for (double t : {0.0, 1.0, 10.0}) CHECK(expectation(m, t) == doctest::Approx(p.equilibrium).scale(1.0));
}

TEST_CASE("non-equidistant spectra are refused") {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
    Eigen::MatrixXcd obs = Eigen::MatrixXcd::Identity(3, 3);
    const DiscreteModel m({0.0, 1.0, 3.0}, rho, obs);
    const auto p = predict(m);
    CHECK(p.verdict.status == VerdictStatus::no_decoherence);
    CHECK(p.verdict.reason == "NonEquidistantSpectrum");
    CHECK_THROWS_AS(frequency_profile(m), NonEquidistantSpectrum);
}

TEST_CASE("large gaussian-offdiag model decoheres and revives") {
    const auto m = generators::gaussian_offdiag(201, 7);
    const auto p = predict(m);
    REQUIRE(p.verdict.status == VerdictStatus::decoheres);
    REQUIRE(p.physical_window);
    REQUIRE(p.recurrence_time);
    CHECK(*p.recurrence_time == doctest::Approx(2.0 * kPi));
    CHECK(p.deviation_bound == doctest::Approx(p.verdict.predicted_bound * p.off_diagonal_mass));
    // window maps through t_phys = t hbar / ((K-2) gap)
    CHECK(p.physical_window->t_low == doctest::Approx(p.verdict.window->t_low / 199.0));

    const auto times = linear_spaced(0.0, 1.25 * *p.recurrence_time, 512);
    const auto rep = evolve_and_check(m, times, p.physical_window);
    REQUIRE(rep.max_deviation_in_window);
    CHECK(*rep.max_deviation_in_window <= p.deviation_bound);
    REQUIRE(rep.revival_time);
    CHECK(std::abs(*rep.revival_time - *p.recurrence_time) <= 0.1 * *p.recurrence_time);
}

TEST_CASE("generators are deterministic in the seed") {
    const auto a = generators::random_hermitian(10, 42), b = generators::random_hermitian(10, 42);
    CHECK(a.rho().isApprox(b.rho(), 0.0));
    CHECK(a.observable().isApprox(b.observable(), 0.0));
    const auto c = generators::random_hermitian(10, 43);
    CHECK_FALSE(a.rho().isApprox(c.rho(), 1e-6));
}
