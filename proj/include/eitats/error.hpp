#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eitats {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used in CLI error reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// A parameter or argument lies outside the domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// The susceptibility denominator vanished.
class SingularEvaluationError : public Error {
public:
    explicit SingularEvaluationError(const std::string& what, std::size_t index = npos)
        : Error("singular_evaluation", what), index_(index) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    /// Offending grid index, or npos for a single-point evaluation.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// The two spectral poles coincide (exceptional point).
class DegeneratePoleError : public Error {
public:
    explicit DegeneratePoleError(const std::string& what) : Error("degenerate_pole", what) {}
};

/// Detuning grid is not strictly increasing or is otherwise unusable.
class GridError : public Error {
public:
    explicit GridError(const std::string& what) : Error("grid", what) {}
};

class FitError : public Error {
public:
    enum class Reason { NoConvergence, DegenerateData, TooFewPoints };

    FitError(Reason reason, const std::string& what)
        : Error(tag(reason), what), reason_(reason) {}

    Reason reason() const noexcept { return reason_; }

private:
    static std::string tag(Reason r) {
        switch (r) {
        case Reason::NoConvergence: return "no_convergence";
        case Reason::DegenerateData: return "degenerate_data";
        case Reason::TooFewPoints: return "too_few_points";
        }
        return "fit";
    }

    Reason reason_;
};

/// Malformed spectrum file; `line()` is 1-based, 0 when not line-specific.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("parse", line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

} // namespace eitats
