#ifndef QSPLINE_SPLINE_HPP
#define QSPLINE_SPLINE_HPP

/**
 * @file spline.hpp
 * @brief Clamped cubic q-spline: moment system, piece construction, evaluation.
 *
 * On interval i (spanning [x_{i-1}, x_i], h_i = x_i - x_{i-1}) the spline is
 *
 *   S_i(x) = mu_i / ([3]_q! h_i) (x - x_{i-1})^3_q
 *          - mu_{i-1} / ([3]_q! h_i) (x - x_i)^3_q
 *          + A_i (x - x_{i-1}) + B_i,
 *
 * whose second formal q-derivative is the linear interpolant of the moments
 * mu_{i-1}, mu_i. A_i and B_i enforce interpolation at both ends. Matching the
 * first formal q-derivatives at interior knots plus the two clamped end
 * conditions gives a tridiagonal system in mu_0..mu_n with
 *
 *   h_hat_i = (q x_i - x_{i-1}) (x_i - q x_{i-1}) / h_i
 *
 * on the diagonal (times [2]_q) and (u - q v)(u - q^2 v) / h off it.
 *
 * Intervals and piece constants are indexed 1..n, as in the formulas above.
 * Continuity is a statement about each piece's polynomial q-derivative, not
 * about the difference quotient of the assembled piecewise function.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qspline/errors.hpp"
#include "qspline/linalg.hpp"
#include "qspline/qcalc.hpp"

namespace qspline {

/// Strictly increasing knots x_0..x_n (n >= 1), values f_0..f_n and the
/// clamped end data D_q f(x_0), D_q f(x_n).
class KnotDataSet {
public:
    KnotDataSet(std::vector<double> knots, std::vector<double> values, double d_left, double d_right)
        : knots_(std::move(knots)), values_(std::move(values)), d_left_(d_left), d_right_(d_right) {
        if (knots_.size() != values_.size()) {
            throw InvalidDataError("knots and values differ in length (" + std::to_string(knots_.size()) +
                                   " vs " + std::to_string(values_.size()) + ")");
        }
        if (knots_.size() < 2) throw InvalidDataError("at least two knots are required");
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i])) {
                throw InvalidDataError("non-finite entry at knot " + std::to_string(i));
            }
            if (i > 0 && !(knots_[i] > knots_[i - 1])) {
                throw InvalidDataError("knots must be strictly increasing (knot " + std::to_string(i) + ")");
            }
        }
        if (!std::isfinite(d_left_) || !std::isfinite(d_right_)) {
            throw InvalidDataError("boundary q-derivative values must be finite");
        }
    }

    std::span<const double> knots() const noexcept { return knots_; }
    std::span<const double> values() const noexcept { return values_; }
    double d_left() const noexcept { return d_left_; }
    double d_right() const noexcept { return d_right_; }

    /// Number of intervals.
    std::size_t intervals() const noexcept { return knots_.size() - 1; }

    double max_abs_value() const noexcept {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    friend bool operator==(const KnotDataSet&, const KnotDataSet&) = default;

private:
    std::vector<double> knots_;
    std::vector<double> values_;
    double d_left_;
    double d_right_;
};

/// Second formal q-derivatives of the spline at the knots.
struct Moments {
    std::vector<double> mu;

    friend bool operator==(const Moments&, const Moments&) = default;
};

struct SplinePiece {
    double x_lo;
    double x_hi;
    Polynomial poly;

    friend bool operator==(const SplinePiece&, const SplinePiece&) = default;
};

struct PieceConstants {
    double a;  ///< coefficient of (x - x_{i-1})
    double b;  ///< constant term
};

namespace detail {

inline void check_interval(const KnotDataSet& data, std::size_t i) {
    if (i < 1 || i > data.intervals()) {
        throw std::out_of_range("interval index " + std::to_string(i) + " outside 1.." +
                                std::to_string(data.intervals()));
    }
}

/// (u - q v)^2_q = (u - q v)(u - q^2 v)
inline double shifted_square(double u, double v, QParam q) { return q_power_value(u, q.value() * v, 2, q); }

}  // namespace detail

/// f[x_{i-1}, x_i], i in 1..n.
inline double divided_difference(const KnotDataSet& data, std::size_t i) {
    detail::check_interval(data, i);
    const auto x = data.knots();
    const auto f = data.values();
    return (f[i] - f[i - 1]) / (x[i] - x[i - 1]);
}

/// h_hat_i = (q x_i - x_{i-1})(x_i - q x_{i-1}) / (x_i - x_{i-1}), i in 1..n.
/// May be zero or negative when q != 1.
inline double h_hat(std::span<const double> knots, std::size_t i, QParam q) {
    if (i < 1 || i >= knots.size()) throw std::out_of_range("h_hat: interval index out of range");
    const double lo = knots[i - 1];
    const double hi = knots[i];
    return (q.value() * hi - lo) * (hi - q.value() * lo) / (hi - lo);
}

/// Moment system A mu = b for the clamped cubic q-spline.
inline TridiagonalSystem assemble_system(const KnotDataSet& data, QParam q) {
    const std::size_t n = data.intervals();
    const auto x = data.knots();
    const double two = q_bracket(2, q);
    const double fact3 = q_factorial(3, q);

    TridiagonalSystem sys;
    sys.main.assign(n + 1, 0.0);
    sys.sub.assign(n, 0.0);
    sys.super.assign(n, 0.0);
    sys.rhs.assign(n + 1, 0.0);

    for (std::size_t i = 1; i <= n; ++i) {
        const double h = x[i] - x[i - 1];
        const double hh = h_hat(x, i, q);
        // interval i couples rows i-1 and i
        sys.main[i - 1] += two * hh;
        sys.main[i] += two * hh;
        sys.super[i - 1] = detail::shifted_square(x[i], x[i - 1], q) / h;
        sys.sub[i - 1] = detail::shifted_square(x[i - 1], x[i], q) / h;
    }

    sys.rhs[0] = fact3 * (divided_difference(data, 1) - data.d_left());
    for (std::size_t i = 1; i < n; ++i) {
        sys.rhs[i] = fact3 * (divided_difference(data, i + 1) - divided_difference(data, i));
    }
    sys.rhs[n] = fact3 * (data.d_right() - divided_difference(data, n));
    return sys;
}

/// Solves the moment system. SingularSystemError carries the failing row;
/// fit() adds q.
inline Moments solve_moments(const TridiagonalSystem& sys) { return Moments{solve_tridiagonal(sys)}; }

/// A_i and B_i of interval i in 1..n.
inline PieceConstants piece_constants(const KnotDataSet& data, QParam q, const Moments& moments, std::size_t i) {
    detail::check_interval(data, i);
    const auto x = data.knots();
    const auto f = data.values();
    const double h = x[i] - x[i - 1];
    const double fact3 = q_factorial(3, q);
    const double up = q_power_value(x[i], x[i - 1], 3, q);    // (x_i - x_{i-1})^3_q
    const double down = q_power_value(x[i - 1], x[i], 3, q);  // (x_{i-1} - x_i)^3_q
    const double mu_lo = moments.mu.at(i - 1);
    const double mu_hi = moments.mu.at(i);

    PieceConstants pc{};
    pc.b = f[i - 1] + mu_lo / (fact3 * h) * down;
    pc.a = divided_difference(data, i) - mu_hi / (fact3 * h * h) * up - mu_lo / (fact3 * h * h) * down;
    return pc;
}

/// Monomial-basis pieces S_1..S_n; element i-1 holds interval i.
inline std::vector<SplinePiece> build_pieces(const KnotDataSet& data, QParam q, const Moments& moments) {
    const std::size_t n = data.intervals();
    if (moments.mu.size() != n + 1) throw std::invalid_argument("moment vector has the wrong length");
    const auto x = data.knots();
    const double fact3 = q_factorial(3, q);

    std::vector<SplinePiece> pieces;
    pieces.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double h = x[i] - x[i - 1];
        const auto [a, b] = piece_constants(data, q, moments, i);
        Polynomial p = (moments.mu[i] / (fact3 * h)) * q_power_expand(x[i - 1], 3, q) -
                       (moments.mu[i - 1] / (fact3 * h)) * q_power_expand(x[i], 3, q) +
                       Polynomial({b - a * x[i - 1], a});
        pieces.push_back(SplinePiece{x[i - 1], x[i], std::move(p)});
    }
    return pieces;
}

enum class OutOfRange {
    error,       ///< throw OutOfDomainError outside [x_0, x_n]
    extrapolate  ///< continue the first or last piece
};

/// Fitted clamped cubic q-spline. Immutable once built.
class QSplineModel {
public:
    /// Assembles a model from already-computed parts (e.g. a deserialized
    /// document). Checks structure only: piece count, tiling, degree <= 3.
    /// Whether the parts satisfy the spline conditions is verify_model's job.
    static QSplineModel from_parts(QParam q, KnotDataSet data, Moments moments, std::vector<SplinePiece> pieces) {
        const std::size_t n = data.intervals();
        if (moments.mu.size() != n + 1) throw InvalidDataError("moment vector must have n+1 entries");
        if (pieces.size() != n) throw InvalidDataError("piece count must equal the number of intervals");
        const auto x = data.knots();
        for (std::size_t i = 0; i < n; ++i) {
            if (pieces[i].x_lo != x[i] || pieces[i].x_hi != x[i + 1]) {
                throw InvalidDataError("piece " + std::to_string(i + 1) + " does not span its knot interval");
            }
            if (pieces[i].poly.degree() > 3) {
                throw InvalidDataError("piece " + std::to_string(i + 1) + " has degree above 3");
            }
        }
        return QSplineModel(q, std::move(data), std::move(moments), std::move(pieces));
    }

    QParam q() const noexcept { return q_; }
    const KnotDataSet& data() const noexcept { return data_; }
    const Moments& moments() const noexcept { return moments_; }
    std::span<const SplinePiece> pieces() const noexcept { return pieces_; }

    /// Piece of interval i in 1..n.
    const SplinePiece& piece(std::size_t i) const { return pieces_.at(i - 1); }

    friend bool operator==(const QSplineModel&, const QSplineModel&) = default;

private:
    QSplineModel(QParam q, KnotDataSet data, Moments moments, std::vector<SplinePiece> pieces)
        : q_(q), data_(std::move(data)), moments_(std::move(moments)), pieces_(std::move(pieces)) {}

    QParam q_;
    KnotDataSet data_;
    Moments moments_;
    std::vector<SplinePiece> pieces_;
};

/// assemble -> solve -> piece constants -> pieces.
inline QSplineModel fit(const KnotDataSet& data, QParam q) {
    Moments moments;
    try {
        moments = solve_moments(assemble_system(data, q));
    } catch (const SingularSystemError& e) {
        throw e.with_q(q.value());
    }
    auto pieces = build_pieces(data, q, moments);
    return QSplineModel::from_parts(q, data, std::move(moments), std::move(pieces));
}

/// Interval index (1..n) containing x: [x_0, x_1] for the first, (x_{i-1}, x_i] after.
inline std::size_t locate_segment(const QSplineModel& model, double x, OutOfRange mode = OutOfRange::error) {
    const auto knots = model.data().knots();
    const std::size_t n = model.data().intervals();
    if (!(x >= knots.front() && x <= knots.back())) {
        if (mode == OutOfRange::error || std::isnan(x)) throw OutOfDomainError(x, knots.front(), knots.back());
        return x < knots.front() ? 1 : n;
    }
    const auto it = std::lower_bound(knots.begin(), knots.end(), x);
    const auto k = static_cast<std::size_t>(it - knots.begin());
    return std::max<std::size_t>(k, 1);
}

inline double evaluate(const QSplineModel& model, double x, OutOfRange mode = OutOfRange::error) {
    return model.piece(locate_segment(model, x, mode)).poly(x);
}

/// order-fold formal q-derivative of a single piece's polynomial, evaluated at x.
inline double piece_q_derivative(const SplinePiece& piece, QParam q, int order, double x) {
    if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
    Polynomial p = piece.poly;
    for (int k = 0; k < order; ++k) p = poly_q_derivative(p, q);
    return p(x);
}

/// Formal q-derivative (order 1 or 2) of the piece containing x.
inline double evaluate_formal_Dq(const QSplineModel& model, double x, int order,
                                 OutOfRange mode = OutOfRange::error) {
    if (order != 1 && order != 2) throw std::invalid_argument("evaluate_formal_Dq supports order 1 or 2");
    return piece_q_derivative(model.piece(locate_segment(model, x, mode)), model.q(), order, x);
}

}  // namespace qspline

#endif  // QSPLINE_SPLINE_HPP
