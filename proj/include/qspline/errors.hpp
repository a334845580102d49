#ifndef QSPLINE_ERRORS_HPP
#define QSPLINE_ERRORS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qspline {

/// Argument outside the mathematical domain of an operation (e.g. D_q at x = 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative series did not reach its tolerance within the term cap.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed knot data: non-increasing knots, size mismatch, non-finite entries.
class InvalidDataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation point outside [x_0, x_n] with extrapolation disabled.
class OutOfDomainError : public std::out_of_range {
public:
    explicit OutOfDomainError(double x, double lo, double hi)
        : std::out_of_range(describe(x, lo, hi)), x_(x) {}

    double x() const noexcept { return x_; }

private:
    static std::string describe(double x, double lo, double hi) {
        std::ostringstream os;
        os.precision(17);
        os << "x = " << x << " lies outside [" << lo << ", " << hi << "]";
        return os.str();
    }

    double x_;
};

/// Linear system breakdown. Carries the elimination row and, once known, q.
class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(std::size_t row, double q = std::numeric_limits<double>::quiet_NaN(),
                        const std::string& detail = {})
        : std::runtime_error(describe(row, q, detail)), row_(row), q_(q), detail_(detail) {}

    std::size_t row() const noexcept { return row_; }
    double q() const noexcept { return q_; }
    bool has_q() const noexcept { return !std::isnan(q_); }

    /// Same failure, tagged with the q value the system was assembled for.
    SingularSystemError with_q(double q) const { return SingularSystemError(row_, q, detail_); }

private:
    static std::string describe(std::size_t row, double q, const std::string& detail) {
        std::ostringstream os;
        os.precision(17);
        os << "singular system at row " << row;
        if (!std::isnan(q)) os << " (q = " << q << ")";
        if (!detail.empty()) os << ": " << detail;
        return os.str();
    }

    std::size_t row_;
    double q_;
    std::string detail_;
};

}  // namespace qspline

#endif  // QSPLINE_ERRORS_HPP
