#include "hdboot/bootstrap/draws.hpp"
#include "hdboot/core/errors.hpp"
#include "hdboot/lasso/lasso.hpp"
#include "hdboot/lasso/penalty.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace hdboot;
using namespace hdboot::lasso;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Problem {
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
};

Problem random_problem(int n, int p, std::uint64_t seed, double noise = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Problem pr{Eigen::VectorXd(n), Eigen::MatrixXd(n, p)};
    for (auto& v : pr.X.reshaped()) v = g(rng);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    for (int j = 0; j < std::min(p, 3); ++j) beta[j] = 1.0 + j;
    pr.y = pr.X * beta;
    for (auto& v : pr.y) v += noise * g(rng);
    return pr;
}

} // namespace

TEST_CASE("soft_threshold examples") {
    CHECK(soft_threshold(2.0, 0.5) == 1.5);
    CHECK(soft_threshold(-0.3, 0.5) == 0.0);
    CHECK(soft_threshold(-2.0, 0.5) == -1.5);
    CHECK(soft_threshold(0.7, 0.0) == 0.7);
    CHECK_THROWS_AS(soft_threshold(1.0, -0.1), ConfigError);
}

TEST_CASE("lasso_fit examples") {
    SECTION("single constant regressor") {
        const RegressionData d(Eigen::VectorXd::Constant(10, 2.0), DataMatrix(Eigen::MatrixXd::Ones(10, 1)));
        const auto fit = lasso_fit(d, 1.0);
        CHECK_THAT(fit.beta[0], WithinAbs(1.5, 1e-12));
        CHECK(fit.active_set == std::vector<std::size_t>{0});
    }
    SECTION("lambda = 0 on an orthonormal design is least squares") {
        // Columns orthogonal with n^{-1} sum x^2 = 1.
        Eigen::MatrixXd X(4, 2);
        X << 1, 1, 1, -1, -1, 1, -1, -1;
        const Eigen::Vector4d y(3.0, -1.0, 0.5, 2.0);
        const auto fit = lasso_fit(RegressionData(y, DataMatrix(X)), 0.0);
        const Eigen::VectorXd ls = (X.transpose() * X).ldlt().solve(X.transpose() * y);
        CHECK((fit.beta - ls).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("lambda above the KKT threshold gives zero") {
        const Problem pr = random_problem(30, 5, 4);
        const double thr = 2.0 * (pr.X.transpose() * pr.y / 30.0).cwiseAbs().maxCoeff();
        const RegressionData d(pr.y, DataMatrix(pr.X));
        CHECK(lasso_fit(d, thr).beta.isZero(0.0));
        CHECK(lasso_fit(d, 1.01 * thr).beta.isZero(0.0));
        CHECK_FALSE(lasso_fit(d, 0.9 * thr).beta.isZero(0.0));
        // Brute-force 1-D check on each coordinate: at lambda = thr, zero is optimal in every single direction.
        for (int j = 0; j < 5; ++j) {
            const Eigen::MatrixXd xj = pr.X.col(j);
            CHECK(std::abs(oracle::lasso_brute_force(pr.y, xj, thr)[0]) < 1e-6);
        }
    }
    CHECK_THROWS_AS(lasso_fit(RegressionData(Eigen::VectorXd::Ones(3), DataMatrix(Eigen::MatrixXd::Ones(3, 1))), -1.0),
                    ConfigError);
}

TEST_CASE("lasso_fit matches brute-force minimization for p <= 2") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> lam(0.01, 2.0);
    for (int c = 0; c < 40; ++c) {
        const int p = 1 + c % 2;
        const Problem pr = random_problem(8 + c % 5, p, 1000 + c);
        const double lambda = lam(rng);
        const auto fit = lasso_fit(RegressionData(pr.y, DataMatrix(pr.X)), lambda, 1e-12);
        const Eigen::VectorXd ref = oracle::lasso_brute_force(pr.y, pr.X, lambda);
        CHECK((fit.beta - ref).cwiseAbs().maxCoeff() < 1e-6);
        CHECK(fit.objective <= oracle::lasso_objective(pr.y, pr.X, ref, lambda) + 1e-12);
    }
}

TEST_CASE("lasso_fit satisfies KKT and its objective never increases") {
    for (int c = 0; c < 10; ++c) {
        Problem pr = random_problem(50, 80, 200 + c);
        // Normalize columns so the KKT statement reads exactly as in the definition.
        for (int j = 0; j < 80; ++j) pr.X.col(j) /= std::sqrt(pr.X.col(j).squaredNorm() / 50.0);
        const RegressionData d(pr.y, DataMatrix(pr.X));
        const double lambda = 0.2 + 0.05 * c;
        const auto fit = lasso_fit(d, lambda, 1e-10);
        CHECK(kkt_violation(d, fit.beta, lambda) < 1e-6);
        CHECK_THAT(fit.objective, WithinRel(objective(d, fit.beta, lambda), 1e-12));
        for (std::size_t k = 1; k < fit.objective_trace.size(); ++k) {
            CHECK(fit.objective_trace[k] <= fit.objective_trace[k - 1] + 1e-12);
        }
        // z_j = n^{-1} x_j^T r + beta_j; active: |2 z_j - 2 beta_j| = lambda, inactive: <= lambda.
        const Eigen::VectorXd r = pr.y - pr.X * fit.beta;
        for (int j = 0; j < 80; ++j) {
            const double g = 2.0 * pr.X.col(j).dot(r) / 50.0;
            if (fit.beta[j] != 0.0) {
                CHECK(std::abs(std::abs(g) - lambda) < 1e-6);
            } else {
                CHECK(std::abs(g) <= lambda + 1e-6);
            }
        }
    }
}

TEST_CASE("lasso_fit reports non-convergence with the last iterate") {
    const Problem pr = random_problem(40, 30, 7);
    const RegressionData d(pr.y, DataMatrix(pr.X));
    try {
        (void)lasso_fit(d, 0.01, 1e-14, 1);
        FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
        CHECK(e.last_iterate().beta.size() == 30);
        CHECK(e.last_iterate().iterations >= 1);
    }
}

TEST_CASE("penalty_homoscedastic") {
    const DataMatrix ones(Eigen::MatrixXd::Ones(100, 1));
    SECTION("p = 1 reproduces the half-normal quantile") {
        // 2 |n^{-1} sum xi_i| = (2 / 10) |Z|; its 0.9-quantile is 0.2 * Phi^{-1}(0.95).
        const double expected = 2.0 * 1.6448536269514722 / 10.0;
        const double lam = penalty_homoscedastic(ones, 1.0, 0.1, 100000, 3);
        // Quantile SE: sqrt(a (1 - a) / B) / density, density of 0.2 |Z| at the quantile = 2 phi(1.645) / 0.2.
        const double density = 2.0 * std::exp(-0.5 * 1.6448536269514722 * 1.6448536269514722) / std::sqrt(2 * M_PI) / 0.2;
        const double se = std::sqrt(0.1 * 0.9 / 100000.0) / density;
        CHECK(std::abs(lam - expected) < 3.0 * se);
        CHECK_THAT(expected, WithinAbs(0.32897, 1e-5));
    }
    const Problem pr = random_problem(60, 20, 9);
    const DataMatrix X(pr.X);
    SECTION("sigma homogeneity and monotonicity in alpha") {
        CHECK_THAT(penalty_homoscedastic(X, 2.0, 0.1, 500, 4), WithinRel(2.0 * penalty_homoscedastic(X, 1.0, 0.1, 500, 4), 1e-14));
        CHECK(penalty_homoscedastic(X, 1.0, 0.01, 500, 4) >= penalty_homoscedastic(X, 1.0, 0.05, 500, 4));
        CHECK(penalty_homoscedastic(X, 1.0, 0.05, 500, 4) >= penalty_homoscedastic(X, 1.0, 0.2, 500, 4));
    }
    CHECK_THROWS_AS(penalty_homoscedastic(X, 0.0, 0.1, 100, 1), ConfigError);
    CHECK_THROWS_AS(penalty_homoscedastic(X, 1.0, 1.0, 100, 1), ConfigError);
}

TEST_CASE("penalty_heteroscedastic") {
    const Problem pr = random_problem(60, 20, 10);
    const DataMatrix X(pr.X);
    CHECK_THAT(penalty_heteroscedastic(X, Eigen::VectorXd::Constant(60, 1.7), 0.1, 400, 5),
               WithinRel(penalty_homoscedastic(X, 1.7, 0.1, 400, 5), 1e-14));
    CHECK_THAT(penalty_heteroscedastic(X, 3.0 * pr.y, 0.1, 400, 5),
               WithinRel(3.0 * penalty_heteroscedastic(X, pr.y, 0.1, 400, 5), 1e-14));
    CHECK_THROWS_AS(penalty_heteroscedastic(X, Eigen::VectorXd::Zero(60), 0.1, 100, 1), InvalidDataError);

    // p = 1, x = 1: quantile of 2 |n^{-1} sum e_i xi_i| computed directly from the same weights.
    const DataMatrix ones(Eigen::MatrixXd::Ones(60, 1));
    const Eigen::MatrixXd W = bootstrap::weight_matrix(bootstrap::Scheme::GaussianMultiplier, 60, 300, 8);
    Eigen::VectorXd stat = 2.0 * (W * pr.y).cwiseAbs() / 60.0;
    std::sort(stat.begin(), stat.end());
    CHECK(penalty_heteroscedastic(ones, pr.y, 0.1, 300, 8) == stat[269]);
}

TEST_CASE("rlasso_pipeline") {
    SECTION("refinement count and lambda trace") {
        const Problem pr = random_problem(80, 40, 11);
        const RegressionData d(pr.y, DataMatrix(pr.X));
        RlassoOptions o;
        o.B = 300;
        o.seed = 2;
        o.refinements = 1;
        const auto one = rlasso_pipeline(d, o);
        CHECK(one.lambda_trace.size() == 2);
        CHECK(one.lambda == one.lambda_trace.back());
        o.refinements = 3;
        CHECK(rlasso_pipeline(d, o).lambda_trace.size() == 4);
        o.refinements = 0;
        CHECK_THROWS_AS(rlasso_pipeline(d, o), ConfigError);
    }
    SECTION("noiseless strong signal recovers the support") {
        std::mt19937_64 rng(12);
        std::normal_distribution<double> g;
        Eigen::MatrixXd X(200, 50);
        for (auto& v : X.reshaped()) v = g(rng);
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(50);
        beta[3] = 4.0;
        beta[17] = -3.0;
        beta[40] = 5.0;
        const RegressionData d(X * beta, DataMatrix(X));
        for (auto mode : {NoiseModel::Heteroscedastic, NoiseModel::Homoscedastic}) {
            RlassoOptions o;
            o.mode = mode;
            o.B = 500;
            const auto fit = rlasso_pipeline(d, o);
            CHECK(fit.beta[3] != 0.0);
            CHECK(fit.beta[17] != 0.0);
            CHECK(fit.beta[40] != 0.0);
        }
    }
    SECTION("null model selects nothing in most replications") {
        // beta* = 0, t5 errors: the penalty dominates the score with probability about 1 - alpha.
        const int reps = 200;
        int empty = 0;
        for (int r = 0; r < reps; ++r) {
            std::mt19937_64 rng(5000 + r);
            std::normal_distribution<double> g;
            std::student_t_distribution<double> t5(5.0);
            Eigen::MatrixXd X(100, 200);
            for (auto& v : X.reshaped()) v = g(rng);
            Eigen::VectorXd y(100);
            for (auto& v : y) v = t5(rng);
            RlassoOptions o;
            o.B = 300;
            o.seed = static_cast<std::uint64_t>(r);
            if (rlasso_pipeline(RegressionData(y, DataMatrix(X)), o).beta.isZero(0.0)) ++empty;
        }
        const double rate = static_cast<double>(empty) / reps;
        CHECK(rate >= 1.0 - 0.1 - 0.03 - 3.0 * std::sqrt(0.9 * 0.1 / reps));
    }
}

TEST_CASE("sup_score_test") {
    const Problem pr = random_problem(70, 30, 13);
    const DataMatrix X(pr.X);
    const auto zero = sup_score_test(RegressionData(Eigen::VectorXd::Zero(70), X), 0.1, 200, 1);
    CHECK(zero.statistic == 0.0);
    CHECK_FALSE(zero.reject);

    const auto a = sup_score_test(RegressionData(pr.y, X), 0.1, 300, 2);
    const auto b = sup_score_test(RegressionData(4.5 * pr.y, X), 0.1, 300, 2);
    CHECK_THAT(b.statistic, WithinRel(4.5 * a.statistic, 1e-13));
    CHECK_THAT(b.critical_value, WithinRel(4.5 * a.critical_value, 1e-13));
    CHECK(a.reject == b.reject);
    CHECK(a.reject);  // strong signal in pr.y
}

TEST_CASE("regression CSV loading and centering") {
    const auto dir = std::filesystem::temp_directory_path() / "hdboot_lasso_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "reg.csv");
        f << "y,x1,x2\n1,2,3\n2,3,5\n6,1,1\n";
    }
    const RegressionData d = load_regression_csv(dir / "reg.csv");
    CHECK(d.n() == 3);
    CHECK(d.p() == 2);
    CHECK(d.y[2] == 6.0);
    const RegressionData c = center(d);
    CHECK(std::abs(c.y.sum()) < 1e-14);
    CHECK(c.X.values().colwise().sum().cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(RegressionData(Eigen::VectorXd::Zero(2), DataMatrix(Eigen::MatrixXd::Zero(3, 1))), InvalidDataError);
}
