#include "hdboot/gaussian/reference.hpp"

#include "hdboot/core/csv.hpp"
#include "hdboot/core/errors.hpp"
#include "hdboot/core/parallel.hpp"
#include "hdboot/core/rng.hpp"
#include "hdboot/gaussian/psd_factor.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace hdboot::gaussian {

namespace {

constexpr std::size_t kChunk = 4096;

Eigen::MatrixXd standard_normal_rows(std::size_t first, std::size_t count, std::size_t r, std::uint64_t seed) {
    Eigen::MatrixXd Z(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(r));
    for (std::size_t b = 0; b < count; ++b) {
        Engine rng(stream_seed(seed, first + b));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t k = 0; k < r; ++k) Z(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k)) = normal(rng);
    }
    return Z;
}

Eigen::MatrixXd draw_rows(const PSDFactor& f, std::size_t first, std::size_t count, std::uint64_t seed) {
    const Eigen::MatrixXd Z = standard_normal_rows(first, count, f.rank, seed);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(count), f.factor.rows());
    if (f.rank == 0) {
        out.setZero();
    } else {
        out.noalias() = Z * f.factor.transpose();
    }
    return out;
}

} // namespace

Eigen::MatrixXd gaussian_draws(const CovMatrix& S, std::size_t B, std::uint64_t seed) {
    if (B < 1) throw ConfigError("gaussian_draws: B must be >= 1");
    return draw_rows(psd_factor(S), 0, B, seed);
}

Eigen::VectorXd gaussian_max_draws(const CovMatrix& S, std::size_t B, std::uint64_t seed, MaxMode mode) {
    if (B < 1) throw ConfigError("gaussian_max_draws: B must be >= 1");
    const PSDFactor f = psd_factor(S);
    Eigen::VectorXd out(static_cast<Eigen::Index>(B));
    const std::size_t chunks = (B + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t first = c * kChunk;
        const std::size_t count = std::min(kChunk, B - first);
        out.segment(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count)) =
            row_max_stat(draw_rows(f, first, count, seed), mode);
    });
    return out;
}

double nazarov_bound(double p, double sigma_lo, double delta) {
    if (!(p >= 2.0)) throw ConfigError("nazarov_bound: p must be >= 2");
    if (!(sigma_lo > 0.0)) throw ConfigError("nazarov_bound: sigma_lo must be > 0");
    if (!(delta >= 0.0)) throw ConfigError("nazarov_bound: delta must be >= 0");
    return delta * (std::sqrt(2.0 * std::log(p)) + 2.0) / sigma_lo;
}

double max_entrywise_gap(const CovMatrix& S1, const CovMatrix& S2) {
    if (S1.p() != S2.p()) {
        throw InvalidDataError("covariance matrices differ in dimension (" + std::to_string(S1.p()) + " vs " +
                               std::to_string(S2.p()) + ")");
    }
    return (S1.entries() - S2.entries()).cwiseAbs().maxCoeff();
}

double comparison_scale(const CovMatrix& S1, const CovMatrix& S2, double p) {
    if (!(p >= 1.0)) throw ConfigError("comparison_scale: p must be >= 1");
    return std::sqrt(max_entrywise_gap(S1, S2)) * std::log(p);
}

namespace {

void check_np(double n, double p) {
    if (!(n >= 2.0) || !(p >= 2.0)) throw ConfigError("rate functionals need n >= 2 and p >= 2");
}

} // namespace

double rate_delta1(const RateInputs& r, double n, double p) {
    r.validate();
    check_np(n, p);
    const double l = std::log(p * n);
    return std::pow(r.B_n * r.B_n * std::pow(l, 5.0) / n, 0.25);
}

double rate_delta2(const RateInputs& r, double n, double p) {
    r.validate();
    check_np(n, p);
    if (!r.q) throw ConfigError("rate_delta2 needs a moment order q > 2");
    const double q = *r.q;
    const double l = std::log(p * n);
    return std::sqrt(r.B_n * r.B_n * std::pow(l, 3.0 - 2.0 / q) / std::pow(n, 1.0 - 2.0 / q));
}

bool AnticoncentrationReport::any_violation() const {
    return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.violation; });
}

AnticoncentrationReport anticoncentration_from_maxima(std::span<const double> maxima, std::size_t p, double sigma_lo,
                                                      double delta, std::span<const double> t_grid) {
    if (maxima.empty()) throw InvalidDataError("anticoncentration check needs at least one draw");
    const double bound = nazarov_bound(static_cast<double>(p), sigma_lo, delta);
    std::vector<double> sorted(maxima.begin(), maxima.end());
    std::sort(sorted.begin(), sorted.end());
    const double B = static_cast<double>(sorted.size());

    AnticoncentrationReport report;
    report.sigma_lo = sigma_lo;
    report.delta = delta;
    report.B = sorted.size();
    report.rows.reserve(t_grid.size());
    for (double t : t_grid) {
        // #{t < W <= t + delta}
        const auto lo = std::upper_bound(sorted.begin(), sorted.end(), t);
        const auto hi = std::upper_bound(sorted.begin(), sorted.end(), t + delta);
        const double mass = static_cast<double>(hi - lo) / B;
        const double se = std::sqrt(mass * (1.0 - mass) / B);
        report.rows.push_back({t, mass, bound, se, mass > bound + 4.0 * se});
    }
    return report;
}

AnticoncentrationReport anticoncentration_check(const CovMatrix& S, double delta, std::span<const double> t_grid,
                                                std::size_t B, std::uint64_t seed) {
    const double min_var = S.entries().diagonal().minCoeff();
    if (!(min_var > 0.0)) {
        Eigen::Index j = 0;
        S.entries().diagonal().minCoeff(&j);
        throw DegenerateCoordinateError(static_cast<std::size_t>(j),
                                        "anticoncentration_check: zero variance at coordinate " + std::to_string(j));
    }
    const Eigen::VectorXd maxima = gaussian_max_draws(S, B, seed, MaxMode::Max);
    return anticoncentration_from_maxima(std::span<const double>(maxima.data(), B), S.p(), std::sqrt(min_var), delta,
                                         t_grid);
}

void write_csv(std::ostream& out, const AnticoncentrationReport& report) {
    out << "t,mass,bound,se,violation\n";
    for (const auto& r : report.rows) {
        out << format_double(r.t) << ',' << format_double(r.mass) << ',' << format_double(r.bound) << ','
            << format_double(r.se) << ',' << (r.violation ? 1 : 0) << '\n';
    }
}

} // namespace hdboot::gaussian
