#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <utility>

#include "adscp/ads.hpp"
#include "adscp/basis.hpp"
#include "adscp/errors.hpp"

namespace adscp {

/// Standard normal CDF.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Deterministic odd/even split of a sample by original position.
/// Interleaving first/second restores the input; for odd n the first
/// half holds the extra observation.
struct SplitPair {
    FunctionalSample first;   ///< observations 1, 3, 5, ...
    FunctionalSample second;  ///< observations 2, 4, 6, ...
};

inline SplitPair split(const FunctionalSample& sample) {
    const Eigen::Index n = sample.size();
    if (n < 8) throw InsufficientDataError("splitting needs at least 8 observations");
    Eigen::MatrixXd first((n + 1) / 2, sample.dim());
    Eigen::MatrixXd second(n / 2, sample.dim());
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i % 2 == 0)
            first.row(i / 2) = sample.coeffs().row(i);
        else
            second.row(i / 2) = sample.coeffs().row(i);
    }
    return {FunctionalSample(std::move(first), sample.basis()),
            FunctionalSample(std::move(second), sample.basis())};
}

/// Target and lag-difference variance matrices of one half.  Differences
/// run over consecutive elements of the half; prefactors use the half's
/// own length (any common prefactor cancels in the ratio statistic).
struct HalfMatrices {
    Eigen::MatrixXd target;  ///< centered covariance minus the noise term
    Eigen::MatrixXd noise;   ///< half the lag-one difference covariance
};

inline HalfMatrices half_matrices(const FunctionalSample& half) {
    const Eigen::MatrixXd& c = half.coeffs();
    const Eigen::Index t = c.rows();
    if (t < 4) throw InsufficientDataError("each half needs at least 4 observations");
    const Eigen::RowVectorXd mean = c.colwise().mean();
    const Eigen::MatrixXd centered = c.rowwise() - mean;
    const Eigen::MatrixXd diffs = c.bottomRows(t - 1) - c.topRows(t - 1);
    const double tt = static_cast<double>(t);
    const Eigen::MatrixXd cov = symmetric_part(centered.transpose() * centered / tt);
    Eigen::MatrixXd noise = symmetric_part(diffs.transpose() * diffs / (2.0 * tt));
    return {cov - noise, std::move(noise)};
}

/// Projection direction maximizing the standardized change signal of one
/// half: whiten the target by noise^{-1/2}, take the top eigenvector, map
/// it back.  The returned scale is arbitrary; the statistic is invariant
/// to it.
inline Eigen::VectorXd optimal_direction(const Eigen::MatrixXd& target,
                                         const Eigen::MatrixXd& noise) {
    const Eigen::MatrixXd w = inverse_sqrt_psd(noise);
    const SymEig eig = sym_eig(symmetric_part(w * target * w));
    return w * eig.vectors.col(0);
}

/// Standardized quadratic-form statistic sqrt(T) d'Ad / d'Qd for a half
/// with T observations.
inline double test_statistic(const Eigen::VectorXd& direction, const HalfMatrices& matrices,
                             Eigen::Index t) {
    const double denom = direction.dot(matrices.noise * direction);
    if (!(denom > 1e-300))
        throw DegenerateVarianceError("projected variance is numerically zero");
    const double num = direction.dot(matrices.target * direction);
    return std::sqrt(static_cast<double>(t)) * num / denom;
}

/// Outcome of the split-sample test against a standard normal reference.
struct TestResult {
    double statistic = 0.0;       ///< standardized statistic from the second half
    Eigen::VectorXd direction;    ///< projection direction picked by the first half
    double p_value = 1.0;         ///< two-sided normal p-value
    bool reject = false;
    double level = 0.05;
};

/// Split-sample change point existence test: the odd half picks the
/// projection direction, the even half carries the statistic, and the
/// decision is two-sided against the standard normal.
inline TestResult ads_test(const FunctionalSample& sample, double level = 0.05) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
    const SplitPair halves = split(sample);
    const HalfMatrices m1 = half_matrices(halves.first);
    const HalfMatrices m2 = half_matrices(halves.second);
    TestResult out;
    out.level = level;
    out.direction = optimal_direction(m1.target, m1.noise);
    out.statistic = test_statistic(out.direction, m2, halves.second.size());
    out.p_value = 2.0 * (1.0 - normal_cdf(std::abs(out.statistic)));
    // p < level is the same decision as |statistic| > z_{level/2}
    out.reject = out.p_value < level;
    return out;
}

} // namespace adscp
