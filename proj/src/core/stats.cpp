#include "hdboot/core/stats.hpp"

#include "hdboot/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hdboot {

Eigen::VectorXd scaled_mean(const DataMatrix& X) {
    return X.values().colwise().sum().transpose() / std::sqrt(static_cast<double>(X.n()));
}

Eigen::VectorXd column_means(const DataMatrix& X) {
    return X.values().colwise().mean().transpose();
}

Eigen::MatrixXd centered(const DataMatrix& X) {
    return X.values().rowwise() - X.values().colwise().mean();
}

CovMatrix empirical_covariance(const DataMatrix& X) {
    const Eigen::MatrixXd c = centered(X);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(c.cols(), c.cols());
    s.selfadjointView<Eigen::Lower>().rankUpdate(c.transpose(), 1.0 / static_cast<double>(X.n()));
    Eigen::MatrixXd full = s.selfadjointView<Eigen::Lower>();
    return CovMatrix::trusted(std::move(full));
}

Eigen::VectorXd column_variances(const DataMatrix& X) {
    const Eigen::MatrixXd c = centered(X);
    return c.colwise().squaredNorm().transpose() / static_cast<double>(X.n());
}

Eigen::VectorXd studentize(const Eigen::VectorXd& v, const Eigen::VectorXd& diag) {
    if (v.size() != diag.size()) {
        throw InvalidDataError("studentize: vector and diagonal differ in length");
    }
    Eigen::VectorXd out(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        if (!(diag[j] > 0.0)) {
            throw DegenerateCoordinateError(static_cast<std::size_t>(j),
                                            "degenerate coordinate " + std::to_string(j) +
                                                ": variance " + std::to_string(diag[j]) + " is not positive");
        }
        out[j] = v[j] / std::sqrt(diag[j]);
    }
    return out;
}

double max_stat(std::span<const double> v, MaxMode mode) {
    if (v.empty()) {
        throw InvalidDataError("max_stat of an empty vector");
    }
    if (mode == MaxMode::Max) {
        return *std::max_element(v.begin(), v.end());
    }
    double m = std::abs(v.front());
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_stat(const Eigen::VectorXd& v, MaxMode mode) {
    return max_stat(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), mode);
}

Eigen::VectorXd row_max_stat(const Eigen::MatrixXd& rows, MaxMode mode) {
    if (rows.cols() == 0) {
        throw InvalidDataError("row_max_stat of an empty replicate matrix");
    }
    if (mode == MaxMode::Max) {
        return rows.rowwise().maxCoeff();
    }
    return rows.cwiseAbs().rowwise().maxCoeff();
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw InvalidDataError("ks_distance needs two non-empty samples");
    }
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());

    // Merge walk: after consuming every copy of the current pooled value,
    // both ECDFs are evaluated exactly at that point.
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < sa.size() || j < sb.size()) {
        double x;
        if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
            x = sa[i];
        } else {
            x = sb[j];
        }
        while (i < sa.size() && sa[i] == x) ++i;
        while (j < sb.size() && sb[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_standard_error(std::size_t na, std::size_t nb) {
    return 0.5 * std::sqrt(1.0 / static_cast<double>(na) + 1.0 / static_cast<double>(nb));
}

} // namespace hdboot
