#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace decolemma {

// Base for every error raised by the library. Analysis outcomes (no
// decoherence, inconclusive) are not errors; they live in the verdict types.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    LengthMismatch(std::size_t expected, std::size_t got)
        : Error("length mismatch: expected " + std::to_string(expected) + " values, got " +
                std::to_string(got)),
          expected_(expected), got_(got) {}
    std::size_t expected() const noexcept { return expected_; }
    std::size_t got() const noexcept { return got_; }

private:
    std::size_t expected_;
    std::size_t got_;
};

class NonFiniteValue : public Error {
public:
    explicit NonFiniteValue(std::size_t index)
        : Error("non-finite value at index " + std::to_string(index)), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class NonEquidistantSpectrum : public Error {
public:
    explicit NonEquidistantSpectrum(double max_relative_deviation)
        : Error("spectrum is not equidistant: max relative gap deviation " +
                std::to_string(max_relative_deviation)),
          deviation_(max_relative_deviation) {}
    double max_relative_deviation() const noexcept { return deviation_; }

private:
    double deviation_;
};

class NotInL1Class : public Error {
public:
    NotInL1Class(std::size_t best_p, double best_flatness)
        : Error("no class-1 decomposition meets the flatness tolerance (best P=" +
                std::to_string(best_p) + ", flatness " + std::to_string(best_flatness) + ")"),
          best_p_(best_p), best_flatness_(best_flatness) {}
    /// Largest-P candidate with the smallest achieved flatness; 0 when no divisor was admissible.
    std::size_t best_p() const noexcept { return best_p_; }
    double best_flatness() const noexcept { return best_flatness_; }

private:
    std::size_t best_p_;
    double best_flatness_;
};

class IndexOutOfComponent : public Error {
public:
    using Error::Error;
};

class WindowEmpty : public Error {
public:
    WindowEmpty(double kappa, std::size_t p)
        : Error("decoherence window is empty: kappa=" + std::to_string(kappa) +
                " exceeds P=" + std::to_string(p)),
          kappa_(kappa), p_(p) {}
    double kappa() const noexcept { return kappa_; }
    std::size_t p() const noexcept { return p_; }

private:
    double kappa_;
    std::size_t p_;
};

class WindowViolation : public Error {
public:
    using Error::Error;
};

class HermiticityViolation : public Error {
public:
    using Error::Error;
};

// Malformed external input (CSV, model files). Carries the 1-based line when known.
class InputError : public Error {
public:
    InputError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + (line ? ":" + std::to_string(line) : std::string{}) + ": " + what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace decolemma
