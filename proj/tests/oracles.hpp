#pragma once

// Slow reference implementations used as test oracles.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

inline double lasso_objective(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                              double lambda) {
    return (y - X * beta).squaredNorm() / static_cast<double>(y.size()) + lambda * beta.lpNorm<1>();
}

/// Golden-section minimizer of a convex function on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Brute-force Lasso for p <= 2: nested golden-section search on a box that must contain the minimizer.
inline Eigen::VectorXd lasso_brute_force(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, double lambda) {
    const auto p = X.cols();
    // f(beta) <= f(0) forces lambda |beta_j| <= mean(y^2).
    const double radius = y.squaredNorm() / static_cast<double>(y.size()) / lambda + 1.0;
    if (p == 1) {
        Eigen::VectorXd b(1);
        b[0] = golden_min([&](double t) { return lasso_objective(y, X, Eigen::VectorXd::Constant(1, t), lambda); },
                          -radius, radius);
        return b;
    }
    auto inner = [&](double b1) {
        return golden_min([&](double b2) { return lasso_objective(y, X, Eigen::Vector2d(b1, b2), lambda); }, -radius,
                          radius);
    };
    const double b1 = golden_min(
        [&](double t) { return lasso_objective(y, X, Eigen::Vector2d(t, inner(t)), lambda); }, -radius, radius);
    return Eigen::Vector2d(b1, inner(b1));
}

/// Smallest k with k / B >= level, by direct search.
inline std::size_t rank_for(double level, std::size_t B) {
    for (std::size_t k = 1; k <= B; ++k) {
        if (static_cast<double>(k) >= level * static_cast<double>(B) - 1e-9) return k;
    }
    return B;
}

inline double subset_quantile(const Eigen::MatrixXd& draws, const std::vector<std::size_t>& w, double level) {
    std::vector<double> m;
    for (Eigen::Index b = 0; b < draws.rows(); ++b) {
        double v = -INFINITY;
        for (const auto j : w) v = std::max(v, draws(b, static_cast<Eigen::Index>(j)));
        m.push_back(v);
    }
    std::sort(m.begin(), m.end());
    return m[rank_for(level, m.size()) - 1];
}

struct StepdownOutcome {
    std::vector<std::size_t> step_of;  // 0 = not rejected
    std::vector<double> critical;
    Eigen::VectorXd adjusted_p;
};

/// Stepdown straight from its definition, recomputing every subset quantile by sorting.
inline StepdownOutcome stepdown(const Eigen::VectorXd& t, const Eigen::MatrixXd& draws, double alpha) {
    const auto p = static_cast<std::size_t>(t.size());
    const auto B = static_cast<std::size_t>(draws.rows());
    StepdownOutcome out;
    out.step_of.assign(p, 0);
    std::vector<std::size_t> w(p);
    std::iota(w.begin(), w.end(), std::size_t{0});
    for (std::size_t step = 1; !w.empty(); ++step) {
        const double c = subset_quantile(draws, w, 1.0 - alpha);
        out.critical.push_back(c);
        std::vector<std::size_t> keep;
        for (const auto j : w) {
            if (t[static_cast<Eigen::Index>(j)] > c) {
                out.step_of[j] = step;
            } else {
                keep.push_back(j);
            }
        }
        if (keep.size() == w.size()) break;
        w = keep;
    }

    // Position of each hypothesis in the ascending (stable) order of t.
    std::vector<std::size_t> ord(p);
    std::iota(ord.begin(), ord.end(), std::size_t{0});
    std::stable_sort(ord.begin(), ord.end(), [&](auto a, auto b) { return t[static_cast<Eigen::Index>(a)] < t[static_cast<Eigen::Index>(b)]; });
    std::vector<std::size_t> pos(p);
    for (std::size_t k = 0; k < p; ++k) pos[ord[k]] = k;

    out.adjusted_p.resize(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
        std::size_t worst = 0;
        for (std::size_t j2 = 0; j2 < p; ++j2) {
            if (pos[j2] < pos[j]) continue;
            std::size_t count = 0;
            for (std::size_t b = 0; b < B; ++b) {
                double m = -INFINITY;
                for (std::size_t i = 0; i < p; ++i) {
                    if (pos[i] <= pos[j2]) m = std::max(m, draws(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(i)));
                }
                if (m >= t[static_cast<Eigen::Index>(j2)]) ++count;
            }
            worst = std::max(worst, count);
        }
        out.adjusted_p[static_cast<Eigen::Index>(j)] = static_cast<double>(1 + worst) / static_cast<double>(B + 1);
    }
    return out;
}

} // namespace oracle
