#ifndef QSPLINE_ORACLE_HPP
#define QSPLINE_ORACLE_HPP

/**
 * @file oracle.hpp
 * @brief Dense cross-check of the moment construction.
 *
 * Unknowns are the 4n monomial coefficients (c0..c3 of each piece). Every row
 * is one scalar spline condition written directly against that basis:
 *
 *   2n    interpolation rows       S_i(x_{i-1}) = f_{i-1},  S_i(x_i) = f_i
 *   n-1   first-order continuity   D_q S_i(x_i) = D_q S_{i+1}(x_i)
 *   n-1   second-order continuity  D_q^2 S_i(x_i) = D_q^2 S_{i+1}(x_i)
 *   2     clamped ends             D_q S_1(x_0) = d_left,  D_q S_n(x_n) = d_right
 *
 * using only D_q x^k = [k]_q x^(k-1). Nothing here touches moments, h_hat or
 * the tridiagonal system.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qspline/errors.hpp"
#include "qspline/linalg.hpp"
#include "qspline/qcalc.hpp"
#include "qspline/spline.hpp"

namespace qspline {

enum class ConditionKind { interpolation, continuity_d1, continuity_d2, clamped, moment };

inline const char* to_string(ConditionKind k) {
    switch (k) {
        case ConditionKind::interpolation: return "interpolation";
        case ConditionKind::continuity_d1: return "continuity_d1";
        case ConditionKind::continuity_d2: return "continuity_d2";
        case ConditionKind::clamped: return "clamped";
        case ConditionKind::moment: return "moment";
    }
    return "unknown";
}

struct ConditionRow {
    ConditionKind kind;
    std::size_t knot;  ///< knot index the condition is imposed at
};

struct DenseConstraintSystem {
    std::size_t intervals = 0;
    DenseMatrix matrix;
    std::vector<double> rhs;
    std::vector<ConditionRow> rows;
};

namespace detail {

/// Weight of coefficient c_k in D_q^order S(x).
inline double dq_weight(std::size_t k, int order, double x, QParam q) {
    if (static_cast<int>(k) < order) return 0.0;
    double w = 1.0;
    for (int j = 0; j < order; ++j) w *= q_bracket(static_cast<int>(k) - j, q);
    return w * std::pow(x, static_cast<int>(k) - order);
}

/// Writes +sign * D_q^order at x for piece `piece` (0-based) into row r.
inline void put_functional(DenseMatrix& a, std::size_t r, std::size_t piece, int order, double x, QParam q,
                           double sign) {
    for (std::size_t k = 0; k < 4; ++k) a(r, 4 * piece + k) += sign * dq_weight(k, order, x, q);
}

}  // namespace detail

inline DenseConstraintSystem assemble_dense(const KnotDataSet& data, QParam q) {
    const std::size_t n = data.intervals();
    const auto x = data.knots();
    const auto f = data.values();

    DenseConstraintSystem sys;
    sys.intervals = n;
    sys.matrix = DenseMatrix(4 * n);
    sys.rhs.assign(4 * n, 0.0);
    sys.rows.reserve(4 * n);

    std::size_t r = 0;
    auto next = [&](ConditionKind kind, std::size_t knot, double rhs) {
        sys.rows.push_back({kind, knot});
        sys.rhs[r] = rhs;
        return r++;
    };

    for (std::size_t p = 0; p < n; ++p) {
        detail::put_functional(sys.matrix, next(ConditionKind::interpolation, p, f[p]), p, 0, x[p], q, 1.0);
        detail::put_functional(sys.matrix, next(ConditionKind::interpolation, p + 1, f[p + 1]), p, 0, x[p + 1], q,
                               1.0);
    }
    for (int order = 1; order <= 2; ++order) {
        const auto kind = order == 1 ? ConditionKind::continuity_d1 : ConditionKind::continuity_d2;
        for (std::size_t k = 1; k < n; ++k) {
            const std::size_t row = next(kind, k, 0.0);
            detail::put_functional(sys.matrix, row, k - 1, order, x[k], q, 1.0);
            detail::put_functional(sys.matrix, row, k, order, x[k], q, -1.0);
        }
    }
    detail::put_functional(sys.matrix, next(ConditionKind::clamped, 0, data.d_left()), 0, 1, x[0], q, 1.0);
    detail::put_functional(sys.matrix, next(ConditionKind::clamped, n, data.d_right()), n - 1, 1, x[n], q, 1.0);
    return sys;
}

struct DenseOracleSolution {
    std::vector<Polynomial> pieces;
    double min_pivot = 0.0;
};

inline DenseOracleSolution dense_solve_detailed(const DenseConstraintSystem& sys) {
    auto sol = dense_lu_solve(sys.matrix, sys.rhs);
    DenseOracleSolution out;
    out.min_pivot = sol.min_pivot;
    for (std::size_t p = 0; p < sys.intervals; ++p) {
        out.pieces.emplace_back(std::vector<double>(sol.x.begin() + 4 * p, sol.x.begin() + 4 * (p + 1)));
    }
    return out;
}

inline std::vector<Polynomial> dense_solve(const DenseConstraintSystem& sys) { return dense_solve_detailed(sys).pieces; }

struct ConditionResult {
    ConditionKind kind;
    std::size_t knot;
    double residual;  ///< |lhs - rhs|
    double scale;     ///< 1 + sum of |terms| + |rhs|
    bool pass;
};

struct OracleComparison {
    bool available = false;  ///< false when the dense system was singular
    double min_pivot = 0.0;
    double max_coeff_diff = 0.0;
    /// max over pieces of |model - oracle| / (1 + largest oracle coefficient of that piece)
    double max_rel_coeff_diff = 0.0;
};

struct VerificationReport {
    double q = 1.0;
    double tol = 0.0;
    std::vector<ConditionResult> conditions;
    double moment_residual = 0.0;
    double moment_bound = 0.0;
    bool moment_pass = false;
    OracleComparison oracle;

    bool all_pass() const {
        return moment_pass && std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
    }

    std::optional<ConditionResult> first_failure() const {
        for (const auto& c : conditions)
            if (!c.pass) return c;
        return std::nullopt;
    }
};

/// Residual of every spline condition, plus moment consistency and the
/// moment-system residual, for an arbitrary (possibly corrupted) model.
/// A condition passes when residual <= tol * scale; the moment system when
/// ||A mu - b||_inf <= tol * (1 + ||b||_inf).
inline VerificationReport verify_model(const QSplineModel& model, double tol) {
    const QParam q = model.q();
    const auto& data = model.data();
    const std::size_t n = data.intervals();

    VerificationReport rep;
    rep.q = q.value();
    rep.tol = tol;

    std::vector<double> coeffs(4 * n, 0.0);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t k = 0; k < 4; ++k) coeffs[4 * p + k] = model.pieces()[p].poly.coeff(k);

    const auto dense = assemble_dense(data, q);
    for (std::size_t r = 0; r < dense.rows.size(); ++r) {
        double lhs = 0.0;
        double mag = 0.0;
        for (std::size_t c = 0; c < coeffs.size(); ++c) {
            const double t = dense.matrix(r, c) * coeffs[c];
            lhs += t;
            mag += std::abs(t);
        }
        const double residual = std::abs(lhs - dense.rhs[r]);
        const double scale = 1.0 + mag + std::abs(dense.rhs[r]);
        rep.conditions.push_back({dense.rows[r].kind, dense.rows[r].knot, residual, scale, residual <= tol * scale});
    }

    const auto& mu = model.moments().mu;
    for (std::size_t k = 0; k <= n; ++k) {
        const auto& piece = model.pieces()[k == 0 ? 0 : k - 1];
        const double d2 = piece_q_derivative(piece, q, 2, data.knots()[k]);
        const double residual = std::abs(d2 - mu[k]);
        const double scale = 1.0 + std::abs(mu[k]);
        rep.conditions.push_back({ConditionKind::moment, k, residual, scale, residual <= tol * scale});
    }

    const auto sys = assemble_system(data, q);
    rep.moment_residual = sys.residual(mu);
    rep.moment_bound = tol * (1.0 + sys.rhs_norm());
    rep.moment_pass = rep.moment_residual <= rep.moment_bound;

    try {
        const auto oracle = dense_solve_detailed(dense);
        rep.oracle.available = true;
        rep.oracle.min_pivot = oracle.min_pivot;
        for (std::size_t p = 0; p < n; ++p) {
            double cmax = 0.0;
            for (double c : oracle.pieces[p].coeffs()) cmax = std::max(cmax, std::abs(c));
            for (std::size_t k = 0; k < 4; ++k) {
                const double diff = std::abs(oracle.pieces[p].coeff(k) - coeffs[4 * p + k]);
                rep.oracle.max_coeff_diff = std::max(rep.oracle.max_coeff_diff, diff);
                rep.oracle.max_rel_coeff_diff = std::max(rep.oracle.max_rel_coeff_diff, diff / (1.0 + cmax));
            }
        }
    } catch (const SingularSystemError&) {
        rep.oracle.available = false;
    }
    return rep;
}

}  // namespace qspline

#endif  // QSPLINE_ORACLE_HPP
