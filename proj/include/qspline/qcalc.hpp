#ifndef QSPLINE_QCALC_HPP
#define QSPLINE_QCALC_HPP

/**
 * @file qcalc.hpp
 * @brief q-calculus primitives and monomial-basis polynomial algebra.
 *
 * The Jackson q-derivative D_q f(x) = (f(qx) - f(x)) / (qx - x) acts on the
 * monomial basis as D_q x^k = [k]_q x^(k-1), where [k]_q = 1 + q + ... + q^(k-1).
 * Everything the spline needs follows from that rule, so polynomials are kept
 * in the ascending monomial basis and q-shifted powers
 *
 *   (x - c)^n_q = (x - c)(x - cq)...(x - cq^(n-1))
 *
 * are expanded into it on construction.
 *
 * Integer q-brackets are geometric sums, so q = 1 reduces to the classical
 * formulas without ever dividing by q - 1.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qspline/errors.hpp"

namespace qspline {

/// Deformation parameter q > 0. q = 1 is the classical case.
class QParam {
public:
    explicit QParam(double q) : q_(q) {
        if (!std::isfinite(q) || !(q > 0.0)) {
            throw DomainError("q must be a finite positive number, got " + std::to_string(q));
        }
    }

    double value() const noexcept { return q_; }
    bool is_classical() const noexcept { return q_ == 1.0; }

    friend bool operator==(QParam a, QParam b) noexcept { return a.q_ == b.q_; }

private:
    double q_;
};

/// Real polynomial, coeffs()[k] multiplies x^k. Trailing zeros are trimmed,
/// so the zero polynomial has no coefficients and degree() == -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }

    static Polynomial constant(double v) { return Polynomial({v}); }
    static Polynomial monomial(std::size_t k, double scale = 1.0) {
        std::vector<double> c(k + 1, 0.0);
        c[k] = scale;
        return Polynomial(std::move(c));
    }

    std::span<const double> coeffs() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }

    /// Coefficient of x^k, zero beyond the stored degree.
    double coeff(std::size_t k) const noexcept { return k < c_.size() ? c_[k] : 0.0; }

    /// Coefficients zero-padded (never truncated) to at least `len` entries.
    std::vector<double> padded(std::size_t len) const {
        std::vector<double> out(c_);
        if (out.size() < len) out.resize(len, 0.0);
        return out;
    }

    /// Horner evaluation.
    double operator()(double x) const noexcept {
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
        return Polynomial(std::move(c));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

    friend Polynomial operator*(double s, const Polynomial& p) {
        std::vector<double> c(p.c_);
        for (double& v : c) v *= s;
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }

    std::vector<double> c_;
};

/// [n]_q = 1 + q + ... + q^(n-1); equals n at q = 1.
inline double q_bracket(int n, QParam q) {
    if (n < 0) throw DomainError("q_bracket requires n >= 0");
    double sum = 0.0;
    double term = 1.0;
    for (int k = 0; k < n; ++k) {
        sum += term;
        term *= q.value();
    }
    return sum;
}

/// [c]_q = (q^c - 1) / (q - 1) for real c, with the limit c at q = 1.
inline double q_bracket_real(double c, QParam q) {
    if (q.is_classical()) return c;
    return std::expm1(c * std::log(q.value())) / (q.value() - 1.0);
}

/// [n]_q! = [1]_q [2]_q ... [n]_q, with [0]_q! = 1.
inline double q_factorial(int n, QParam q) {
    if (n < 0) throw DomainError("q_factorial requires n >= 0");
    double prod = 1.0;
    for (int k = 1; k <= n; ++k) prod *= q_bracket(k, q);
    return prod;
}

/// Monomial expansion of (x - c)^n_q = prod_{k=0}^{n-1} (x - c q^k).
inline Polynomial q_power_expand(double c, int n, QParam q) {
    if (n < 0) throw DomainError("q_power_expand requires n >= 0");
    std::vector<double> coeffs{1.0};
    double root = c;
    for (int k = 0; k < n; ++k) {
        // multiply by (x - root) in place
        coeffs.push_back(0.0);
        for (std::size_t j = coeffs.size() - 1; j > 0; --j) coeffs[j] = coeffs[j - 1] - root * coeffs[j];
        coeffs[0] = -root * coeffs[0];
        root *= q.value();
    }
    return Polynomial(std::move(coeffs));
}

/// Value of (u - c)^n_q at a point, without building the polynomial.
inline double q_power_value(double u, double c, int n, QParam q) {
    double prod = 1.0;
    double root = c;
    for (int k = 0; k < n; ++k) {
        prod *= (u - root);
        root *= q.value();
    }
    return prod;
}

inline double poly_eval(const Polynomial& p, double x) noexcept { return p(x); }

/// Formal q-derivative: D_q x^k = [k]_q x^(k-1).
inline Polynomial poly_q_derivative(const Polynomial& p, QParam q) {
    const auto c = p.coeffs();
    if (c.size() <= 1) return {};
    std::vector<double> out(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) out[k - 1] = q_bracket(static_cast<int>(k), q) * c[k];
    return Polynomial(std::move(out));
}

/// Inverse of poly_q_derivative with zero constant term.
inline Polynomial poly_q_antiderivative(const Polynomial& p, QParam q) {
    const auto c = p.coeffs();
    if (c.empty()) return {};
    std::vector<double> out(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) out[k + 1] = c[k] / q_bracket(static_cast<int>(k + 1), q);
    return Polynomial(std::move(out));
}

/// Literal Jackson difference quotient of a black-box function.
/// Undefined (0/0) at x = 0 and q = 1; both raise DomainError.
template <typename F>
double q_diff_quotient(F&& f, double x, QParam q) {
    if (x == 0.0) throw DomainError("q-difference quotient is 0/0 at x = 0");
    if (q.is_classical()) throw DomainError("q-difference quotient is 0/0 at q = 1");
    const double qx = q.value() * x;
    return (f(qx) - f(x)) / (qx - x);
}

inline constexpr std::size_t kJacksonMaxTerms = 10000;

/// Jackson q-integral (1 - q) x sum_j q^j f(q^j x), for 0 < q < 1.
///
/// Summation stops once two consecutive contributions fall below
/// tol * (1 + |partial|); a single small term (a sign change of f) is not enough.
template <typename F>
double jackson_integral(F&& f, double x, QParam q, double tol) {
    if (q.value() >= 1.0) throw DomainError("Jackson q-integral series diverges for q >= 1");
    if (!std::isfinite(x)) throw DomainError("Jackson q-integral needs a finite upper limit");
    if (!(tol > 0.0)) throw DomainError("Jackson q-integral tolerance must be positive");
    if (x == 0.0) return 0.0;

    const double scale = (1.0 - q.value()) * x;
    double partial = 0.0;
    double weight = 1.0;  // q^j
    bool previous_small = false;
    for (std::size_t j = 0; j < kJacksonMaxTerms; ++j) {
        const double term = scale * weight * f(weight * x);
        const bool small = std::abs(term) < tol * (1.0 + std::abs(partial));
        if (small && previous_small) return partial;
        partial += term;
        previous_small = small;
        weight *= q.value();
    }
    throw ConvergenceError("Jackson q-integral did not converge within " + std::to_string(kJacksonMaxTerms) +
                           " terms");
}

}  // namespace qspline

#endif  // QSPLINE_QCALC_HPP
