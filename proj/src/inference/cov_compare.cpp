#include "hdboot/inference/cov_compare.hpp"

#include "hdboot/bootstrap/draws.hpp"
#include "hdboot/core/errors.hpp"
#include "hdboot/core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace hdboot::inference {

namespace {

constexpr std::size_t kPairChunk = 1024;

struct PairBlock {
    Eigen::MatrixXd xdev; // n x c: centered products minus their mean
    Eigen::MatrixXd ydev; // m x c
    Eigen::VectorXd t;
    Eigen::VectorXd denom;
};

std::vector<std::pair<std::size_t, std::size_t>> upper_pairs(std::size_t p) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(p * (p + 1) / 2);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = j; k < p; ++k) out.emplace_back(j, k);
    }
    return out;
}

PairBlock block(const Eigen::MatrixXd& xc, const Eigen::MatrixXd& yc,
                const std::vector<std::pair<std::size_t, std::size_t>>& pairs, std::size_t begin, std::size_t end) {
    const Eigen::Index n = xc.rows();
    const Eigen::Index m = yc.rows();
    const auto c = static_cast<Eigen::Index>(end - begin);
    PairBlock out{Eigen::MatrixXd(n, c), Eigen::MatrixXd(m, c), Eigen::VectorXd(c), Eigen::VectorXd(c)};
    for (Eigen::Index r = 0; r < c; ++r) {
        const auto [j, k] = pairs[begin + static_cast<std::size_t>(r)];
        const auto jj = static_cast<Eigen::Index>(j);
        const auto kk = static_cast<Eigen::Index>(k);
        out.xdev.col(r) = xc.col(jj).cwiseProduct(xc.col(kk));
        out.ydev.col(r) = yc.col(jj).cwiseProduct(yc.col(kk));
        const double s1 = out.xdev.col(r).mean();
        const double s2 = out.ydev.col(r).mean();
        out.xdev.col(r).array() -= s1;
        out.ydev.col(r).array() -= s2;
        const double v = out.xdev.col(r).squaredNorm() / static_cast<double>(n) / static_cast<double>(n) +
                         out.ydev.col(r).squaredNorm() / static_cast<double>(m) / static_cast<double>(m);
        if (!(v > 0.0)) {
            throw DegeneratePairError(j, k, "pair (" + std::to_string(j) + ", " + std::to_string(k) +
                                                ") has zero variance in both samples");
        }
        out.denom[r] = std::sqrt(v);
        out.t[r] = (s1 - s2) / out.denom[r];
    }
    return out;
}

void check_samples(const DataMatrix& X, const DataMatrix& Y) {
    if (X.p() != Y.p()) {
        throw InvalidDataError("samples have different dimensions: " + std::to_string(X.p()) + " and " +
                               std::to_string(Y.p()));
    }
}

} // namespace

Eigen::VectorXd cov_compare_tstats(const DataMatrix& X, const DataMatrix& Y) {
    check_samples(X, Y);
    const auto pairs = upper_pairs(X.p());
    return block(centered(X), centered(Y), pairs, 0, pairs.size()).t;
}

CovCompareResult cov_compare_test(const DataMatrix& X, const DataMatrix& Y, double alpha, std::size_t B,
                                  std::uint64_t seed) {
    check_samples(X, Y);
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    const Eigen::MatrixXd xc = centered(X);
    const Eigen::MatrixXd yc = centered(Y);
    const auto n = static_cast<double>(X.n());
    const auto m = static_cast<double>(Y.n());
    const auto pairs = upper_pairs(X.p());

    // Columns 0..n-1 weight the first sample, n..n+m-1 the second.
    const Eigen::MatrixXd W = bootstrap::weight_matrix(bootstrap::Scheme::GaussianMultiplier, X.n() + Y.n(), B, seed);
    const auto ni = static_cast<Eigen::Index>(X.n());
    const auto mi = static_cast<Eigen::Index>(Y.n());

    CovCompareResult res;
    res.pairs_tested = pairs.size();
    res.unbalanced = std::max(n, m) / std::min(n, m) > 4.0;
    Eigen::VectorXd boot_max = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(B));
    Eigen::MatrixXd stacked;
    Eigen::MatrixXd rep;
    for (std::size_t begin = 0; begin < pairs.size(); begin += kPairChunk) {
        const std::size_t end = std::min(pairs.size(), begin + kPairChunk);
        const PairBlock blk = block(xc, yc, pairs, begin, end);
        res.statistic = std::max(res.statistic, blk.t.cwiseAbs().maxCoeff());

        const Eigen::VectorXd inv = blk.denom.cwiseInverse();
        stacked.resize(ni + mi, blk.t.size());
        stacked.topRows(ni) = blk.xdev * (inv / n).asDiagonal();
        stacked.bottomRows(mi) = -blk.ydev * (inv / m).asDiagonal();
        rep.noalias() = W * stacked;
        boot_max = boot_max.cwiseMax(rep.cwiseAbs().rowwise().maxCoeff());
    }
    res.critical_value = bootstrap::order_statistic_quantile(
        std::span<const double>(boot_max.data(), static_cast<std::size_t>(boot_max.size())), 1.0 - alpha);
    res.reject = res.statistic > res.critical_value;
    return res;
}

} // namespace hdboot::inference
