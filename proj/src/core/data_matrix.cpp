#include "hdboot/core/data_matrix.hpp"

#include "hdboot/core/errors.hpp"
#include "hdboot/core/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace hdboot {

DataMatrix::DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() < 2) {
        throw InvalidDataError("DataMatrix needs at least 2 rows, got " + std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) {
        throw InvalidDataError("DataMatrix needs at least 1 column");
    }
    if (!values_.allFinite()) {
        throw InvalidDataError("DataMatrix contains non-finite entries");
    }
}

CovMatrix::CovMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw InvalidDataError("covariance matrix must be square and non-empty");
    }
    if (!entries_.allFinite()) {
        throw InvalidDataError("covariance matrix contains non-finite entries");
    }
    const double scale = std::max(entries_.cwiseAbs().maxCoeff(), 1e-300);
    const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance * scale) {
        throw InvalidDataError("covariance matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    }
    const double max_diag = entries_.diagonal().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_, Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -kPsdTolerance * std::max(max_diag, 0.0) || (max_diag <= 0.0 && min_eig < 0.0)) {
        throw InvalidDataError("covariance matrix is not positive semidefinite (min eigenvalue " +
                               std::to_string(min_eig) + ")");
    }
}

CovMatrix CovMatrix::trusted(Eigen::MatrixXd entries) {
    return CovMatrix(std::move(entries), Unchecked{});
}

Rectangle::Rectangle(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size()) {
        throw InvalidDataError("rectangle bounds differ in length");
    }
    for (Eigen::Index j = 0; j < lower.size(); ++j) {
        if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j]) {
            throw InvalidDataError("rectangle has lower > upper at coordinate " + std::to_string(j));
        }
    }
}

bool Rectangle::contains(const Eigen::VectorXd& x) const {
    if (x.size() != lower.size()) {
        throw InvalidDataError("point dimension does not match rectangle");
    }
    return ((x.array() >= lower.array()) && (x.array() <= upper.array())).all();
}

void RateInputs::validate() const {
    if (!(B_n >= 1.0)) throw ConfigError("B_n must be >= 1");
    if (!(sigma_lo > 0.0)) throw ConfigError("sigma_lo must be > 0");
    if (!(sigma_hi >= sigma_lo)) throw ConfigError("sigma_hi must be >= sigma_lo");
    if (q && !(*q > 2.0)) throw ConfigError("q must be > 2");
}

} // namespace hdboot
