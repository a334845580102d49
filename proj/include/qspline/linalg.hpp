#ifndef QSPLINE_LINALG_HPP
#define QSPLINE_LINALG_HPP

/**
 * @file linalg.hpp
 * @brief Small dense and tridiagonal solvers.
 *
 * The moment matrix is tridiagonal but not diagonally dominant once q != 1
 * (its diagonal entries [2]_q * h_hat can vanish or change sign), so the
 * Thomas sweep is guarded: if a pivot collapses relative to its row, the
 * system is handed to row-pivoted dense elimination instead.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "qspline/errors.hpp"

namespace qspline {

/// Row-major square matrix, just enough for desk-scale elimination.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return a_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return a_[r * n_ + c]; }

    std::span<const double> row(std::size_t r) const noexcept { return {a_.data() + r * n_, n_}; }

    std::vector<double> multiply(std::span<const double> x) const {
        std::vector<double> y(n_, 0.0);
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = 0; c < n_; ++c) y[r] += (*this)(r, c) * x[c];
        return y;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

inline constexpr double kPivotTolerance = 1e-12;

struct DenseSolution {
    std::vector<double> x;
    /// Smallest pivot magnitude met during elimination of the row-equilibrated matrix.
    double min_pivot = std::numeric_limits<double>::infinity();
};

/// Gaussian elimination with partial pivoting on the row-equilibrated system.
/// Throws SingularSystemError when a column has no pivot above kPivotTolerance.
inline DenseSolution dense_lu_solve(DenseMatrix a, std::vector<double> b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("dense_lu_solve: rhs size does not match matrix");

    for (std::size_t r = 0; r < n; ++r) {
        double scale = 0.0;
        for (std::size_t c = 0; c < n; ++c) scale = std::max(scale, std::abs(a(r, c)));
        if (scale == 0.0) throw SingularSystemError(r, std::numeric_limits<double>::quiet_NaN(), "zero row");
        for (std::size_t c = 0; c < n; ++c) a(r, c) /= scale;
        b[r] /= scale;
    }

    DenseSolution out;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > std::abs(a(p, k))) p = r;
        const double pivot = std::abs(a(p, k));
        out.min_pivot = std::min(out.min_pivot, pivot);
        if (!(pivot > kPivotTolerance)) {
            throw SingularSystemError(k, std::numeric_limits<double>::quiet_NaN(), "pivot below tolerance");
        }
        if (p != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
            std::swap(b[k], b[p]);
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const double m = a(r, k) / a(k, k);
            if (m == 0.0) continue;
            a(r, k) = 0.0;
            for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= m * a(k, c);
            b[r] -= m * b[k];
        }
    }

    out.x.assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t c = k + 1; c < n; ++c) s -= a(k, c) * out.x[c];
        out.x[k] = s / a(k, k);
    }
    return out;
}

/// Tridiagonal system: row i reads sub[i-1] x[i-1] + main[i] x[i] + super[i] x[i+1] = rhs[i].
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> main;
    std::vector<double> super;
    std::vector<double> rhs;

    std::size_t size() const noexcept { return main.size(); }

    void check_dimensions() const {
        const std::size_t n = main.size();
        if (n == 0 || sub.size() + 1 != n || super.size() + 1 != n || rhs.size() != n) {
            throw std::invalid_argument("tridiagonal system has inconsistent dimensions");
        }
    }

    DenseMatrix to_dense() const {
        check_dimensions();
        const std::size_t n = size();
        DenseMatrix a(n);
        for (std::size_t i = 0; i < n; ++i) {
            a(i, i) = main[i];
            if (i > 0) a(i, i - 1) = sub[i - 1];
            if (i + 1 < n) a(i, i + 1) = super[i];
        }
        return a;
    }

    std::vector<double> multiply(std::span<const double> x) const {
        const std::size_t n = size();
        std::vector<double> y(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = main[i] * x[i];
            if (i > 0) y[i] += sub[i - 1] * x[i - 1];
            if (i + 1 < n) y[i] += super[i] * x[i + 1];
        }
        return y;
    }

    /// ||A x - rhs||_inf
    double residual(std::span<const double> x) const {
        const auto ax = multiply(x);
        double r = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) r = std::max(r, std::abs(ax[i] - rhs[i]));
        return r;
    }

    double rhs_norm() const {
        double r = 0.0;
        for (double v : rhs) r = std::max(r, std::abs(v));
        return r;
    }
};

enum class TridiagonalMethod { thomas, dense_fallback };

struct TridiagonalSolution {
    std::vector<double> x;
    TridiagonalMethod method = TridiagonalMethod::thomas;
};

namespace detail {

inline double row_scale(const TridiagonalSystem& s, std::size_t i) {
    double m = std::abs(s.main[i]);
    if (i > 0) m = std::max(m, std::abs(s.sub[i - 1]));
    if (i + 1 < s.size()) m = std::max(m, std::abs(s.super[i]));
    return m;
}

/// Thomas sweep; returns false as soon as a pivot drops below
/// kPivotTolerance times its row's largest entry.
inline bool thomas_sweep(const TridiagonalSystem& s, std::vector<double>& x) {
    const std::size_t n = s.size();
    std::vector<double> c(n, 0.0);
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double pivot = s.main[i];
        double rhs = s.rhs[i];
        if (i > 0) {
            pivot -= s.sub[i - 1] * c[i - 1];
            rhs -= s.sub[i - 1] * d[i - 1];
        }
        const double scale = row_scale(s, i);
        if (!(std::abs(pivot) > kPivotTolerance * scale)) return false;
        c[i] = (i + 1 < n) ? s.super[i] / pivot : 0.0;
        d[i] = rhs / pivot;
    }
    x.assign(n, 0.0);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return true;
}

}  // namespace detail

inline constexpr double kResidualTolerance = 1e-9;

/// Solves the system, falling back to dense pivoted elimination when the
/// Thomas sweep meets a vanishing pivot. Throws SingularSystemError if the
/// dense path also breaks down or the result misses the residual bound
/// ||A x - b||_inf <= 1e-9 (1 + ||b||_inf).
inline TridiagonalSolution solve_tridiagonal_detailed(const TridiagonalSystem& sys) {
    sys.check_dimensions();
    TridiagonalSolution out;
    const double bound = kResidualTolerance * (1.0 + sys.rhs_norm());

    if (detail::thomas_sweep(sys, out.x) && sys.residual(out.x) <= bound) {
        out.method = TridiagonalMethod::thomas;
        return out;
    }

    out.x = dense_lu_solve(sys.to_dense(), sys.rhs).x;
    out.method = TridiagonalMethod::dense_fallback;
    if (!(sys.residual(out.x) <= bound)) {
        throw SingularSystemError(sys.size() - 1, std::numeric_limits<double>::quiet_NaN(),
                                  "residual exceeds tolerance (numerically singular)");
    }
    return out;
}

inline std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    return solve_tridiagonal_detailed(sys).x;
}

}  // namespace qspline

#endif  // QSPLINE_LINALG_HPP
