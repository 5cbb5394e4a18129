#pragma once

#include <Eigen/Dense>

#include <optional>

namespace hdboot {

/// Closed rectangle prod_j [lower_j, upper_j]; endpoints may be infinite.
struct Rectangle {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    Rectangle(Eigen::VectorXd lo, Eigen::VectorXd hi);

    [[nodiscard]] bool contains(const Eigen::VectorXd& x) const;
};

/// Moment-bound constants entering the rate functionals.
struct RateInputs {
    double B_n = 1.0;
    std::optional<double> q;
    double sigma_lo = 1.0;
    double sigma_hi = 1.0;

    void validate() const;
};

} // namespace hdboot
