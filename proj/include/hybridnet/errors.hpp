#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace hybridnet {

namespace detail {
inline std::string short_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}
}  // namespace detail

/// Adaptive integration or a tail extension ran out of budget.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what + " (best estimate " + detail::short_number(best_estimate) +
                             ", error bound " + detail::short_number(error_bound) + ")"),
          best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

/// Root finder was handed an interval without a sign change.
class BracketError : public std::runtime_error {
public:
    BracketError(const std::string& what, double f_lo, double f_hi)
        : std::runtime_error(what + " (f(lo)=" + detail::short_number(f_lo) +
                             ", f(hi)=" + detail::short_number(f_hi) + ")"),
          f_lo_(f_lo), f_hi_(f_hi) {}

    double f_lo() const noexcept { return f_lo_; }
    double f_hi() const noexcept { return f_hi_; }

private:
    double f_lo_;
    double f_hi_;
};

/// A scenario or config field violates its invariant.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& why)
        : std::invalid_argument(field + ": " + why), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed input file; `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, const std::string& why)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + why),
          source_(std::move(source)), line_(line) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

}  // namespace hybridnet
