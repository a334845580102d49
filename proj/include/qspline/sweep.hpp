#ifndef QSPLINE_SWEEP_HPP
#define QSPLINE_SWEEP_HPP

/**
 * @file sweep.hpp
 * @brief Interpolation-error study over a list of q values.
 *
 * For each q the target polynomial is sampled at the knots, the clamped end
 * data is set to the polynomial's exact formal q-derivative at x_0 and x_n,
 * the spline is fitted, and |S - f| is measured on a uniform grid spanning
 * [x_0, x_n]. Singular configurations are reported, not thrown.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qspline/spline.hpp"

namespace qspline {

enum class SweepStatus { fitted, singular };

inline const char* to_string(SweepStatus s) { return s == SweepStatus::fitted ? "fitted" : "singular"; }

struct SweepRow {
    double q;
    double sup_error;  ///< max |S - f| over the grid
    double l2_error;   ///< root mean square of S - f over the grid
    SweepStatus status;
};

/// Clamped data set sampled from a polynomial, with q-consistent end values.
inline KnotDataSet sample_polynomial(const Polynomial& p, std::vector<double> knots, QParam q) {
    std::vector<double> values;
    values.reserve(knots.size());
    for (double x : knots) values.push_back(p(x));
    const Polynomial dp = poly_q_derivative(p, q);
    const double left = dp(knots.front());
    const double right = dp(knots.back());
    return KnotDataSet(std::move(knots), std::move(values), left, right);
}

/// `points` equally spaced abscissae from lo to hi inclusive (points >= 2),
/// or the single point lo.
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    std::vector<double> xs;
    if (points == 0) return xs;
    if (points == 1) return {lo};
    xs.reserve(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k + 1 < points; ++k) xs.push_back(lo + step * static_cast<double>(k));
    xs.push_back(hi);
    return xs;
}

inline SweepRow sweep_one(const Polynomial& target, const std::vector<double>& knots, QParam q, std::size_t grid) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        const auto model = fit(sample_polynomial(target, knots, q), q);
        double sup = 0.0;
        double sq = 0.0;
        const auto xs = uniform_grid(knots.front(), knots.back(), grid);
        for (double x : xs) {
            const double e = std::abs(evaluate(model, x) - target(x));
            sup = std::max(sup, e);
            sq += e * e;
        }
        return {q.value(), sup, std::sqrt(sq / static_cast<double>(xs.size())), SweepStatus::fitted};
    } catch (const SingularSystemError&) {
        return {q.value(), nan, nan, SweepStatus::singular};
    }
}

/// One row per q, in input order. Fits run on a small worker pool; each
/// worker writes only its own rows.
inline std::vector<SweepRow> run_sweep(const Polynomial& target, const std::vector<double>& knots,
                                       const std::vector<double>& qs, std::size_t grid) {
    if (grid < 2) throw std::invalid_argument("sweep grid needs at least two points");
    std::vector<QParam> params;
    params.reserve(qs.size());
    for (double q : qs) params.emplace_back(q);
    [[maybe_unused]] const KnotDataSet knot_check(knots, std::vector<double>(knots.size(), 0.0), 0.0, 0.0);

    std::vector<SweepRow> rows(params.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < params.size(); i = next++) rows[i] = sweep_one(target, knots, params[i], grid);
    };
    const std::size_t workers =
        std::min<std::size_t>(params.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) jobs.push_back(std::async(std::launch::async, worker));
    for (auto& j : jobs) j.get();
    return rows;
}

}  // namespace qspline

#endif  // QSPLINE_SWEEP_HPP
