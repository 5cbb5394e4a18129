#include "hdboot/gaussian/psd_factor.hpp"

#include "hdboot/core/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace hdboot::gaussian {

PSDFactor psd_factor(const Eigen::MatrixXd& S) {
    if (S.rows() != S.cols()) throw InvalidDataError("psd_factor: matrix is not square");
    if (!S.allFinite()) throw InvalidDataError("psd_factor: matrix has non-finite entries");
    const Eigen::Index p = S.rows();

    const double max_diag = p > 0 ? S.diagonal().maxCoeff() : 0.0;
    const double tol = kPsdTolerance * std::max(max_diag, 0.0);

    // A holds the running Schur complement in permuted order.
    Eigen::MatrixXd A = S;
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(p));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(p, p);

    Eigen::Index r = 0;
    for (; r < p; ++r) {
        Eigen::Index piv = r;
        double best = A(r, r);
        for (Eigen::Index k = r + 1; k < p; ++k) {
            if (A(k, k) > best) {
                best = A(k, k);
                piv = k;
            }
        }
        if (!(best > tol) || best <= 0.0) break;
        if (piv != r) {
            A.row(r).swap(A.row(piv));
            A.col(r).swap(A.col(piv));
            L.row(r).swap(L.row(piv));
            std::swap(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(piv)]);
        }
        const double d = std::sqrt(best);
        L(r, r) = d;
        const Eigen::Index rest = p - r - 1;
        if (rest > 0) {
            L.col(r).tail(rest) = A.col(r).tail(rest) / d;
            A.bottomRightCorner(rest, rest).noalias() -= L.col(r).tail(rest) * L.col(r).tail(rest).transpose();
        }
    }

    if (r < p) {
        const Eigen::Index rest = p - r;
        const auto residual = A.bottomRightCorner(rest, rest);
        const double most_negative = residual.diagonal().minCoeff();
        // For a PSD residual |R_jk| <= sqrt(R_jj R_kk) <= tol; anything much larger is indefiniteness.
        const double bound = 1e-8 * std::max(max_diag, 1e-300);
        if (most_negative < -bound || residual.cwiseAbs().maxCoeff() > bound) {
            throw InvalidDataError("psd_factor: matrix is not positive semidefinite (most negative pivot " +
                                   std::to_string(most_negative) + ")");
        }
    }

    PSDFactor out;
    out.rank = static_cast<std::size_t>(r);
    out.factor = Eigen::MatrixXd::Zero(p, r);
    for (Eigen::Index i = 0; i < p; ++i) {
        out.factor.row(perm[static_cast<std::size_t>(i)]) = L.row(i).head(r);
    }
    return out;
}

PSDFactor psd_factor(const CovMatrix& S) { return psd_factor(S.entries()); }

} // namespace hdboot::gaussian
