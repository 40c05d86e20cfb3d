#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "adscp/basis.hpp"
#include "adscp/errors.hpp"

namespace adscp {

/// Tuning for the thresholding ridge ratio (TRR) dimension selector.
struct TrrParams {
    double tau1 = 0.5;   ///< ratio threshold, in (0, 1)
    double ridge = 0.0;  ///< additive ridge c_n, positive

    /// Recommended tuning for a sample of size n:
    /// tau1 = 0.5, ridge = 0.5 log(log n) / sqrt(n).
    static TrrParams defaults(Eigen::Index n) {
        if (n < 3) throw InsufficientDataError("TRR defaults need n >= 3");
        const double nn = static_cast<double>(n);
        return {0.5, 0.5 * std::log(std::log(nn)) / std::sqrt(nn)};
    }

    void validate() const {
        if (!(tau1 > 0.0 && tau1 < 1.0)) throw DomainError("tau1 must lie in (0, 1)");
        if (!(ridge > 0.0)) throw DomainError("ridge must be positive");
    }
};

/// Symmetric part of a square matrix, evaluated into fresh storage.
inline Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& m) {
    return ((m + m.transpose()) / 2.0).eval();
}

/// Eigendecomposition of a symmetric matrix: eigenvalues descending,
/// matching orthonormal eigenvector columns, each column's
/// largest-magnitude entry made positive.
struct SymEig {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

inline SymEig sym_eig(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 1)
        throw DomainError("eigendecomposition needs a nonempty square matrix");
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw DomainError("matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
    if (solver.info() != Eigen::Success)
        throw ConditioningError("symmetric eigendecomposition did not converge");
    SymEig out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
        Eigen::Index at = 0;
        out.vectors.col(j).cwiseAbs().maxCoeff(&at);
        if (out.vectors(at, j) < 0.0) out.vectors.col(j) = -out.vectors.col(j);
    }
    return out;
}

/// Coefficient-space target matrix: centered covariance minus half the
/// lag-one difference covariance.  Its nonzero eigenspace spans the
/// adjacent deviations of the segment means, so mean changes survive the
/// reduction.
inline Eigen::MatrixXd target_matrix(const FunctionalSample& sample) {
    const Eigen::MatrixXd& c = sample.coeffs();
    const Eigen::Index n = c.rows();
    const Eigen::RowVectorXd mean = c.colwise().mean();
    const Eigen::MatrixXd centered = c.rowwise() - mean;
    const Eigen::MatrixXd diffs = c.bottomRows(n - 1) - c.topRows(n - 1);
    const double nn = static_cast<double>(n);
    return symmetric_part(centered.transpose() * centered / nn -
                          diffs.transpose() * diffs / (2.0 * nn));
}

/// Plain centered covariance of the coefficients (the FPCA target, equal
/// to the target matrix plus the lag-one difference term).
inline Eigen::MatrixXd covariance_matrix(const FunctionalSample& sample) {
    const Eigen::MatrixXd& c = sample.coeffs();
    const Eigen::RowVectorXd mean = c.colwise().mean();
    const Eigen::MatrixXd centered = c.rowwise() - mean;
    return symmetric_part(centered.transpose() * centered / static_cast<double>(c.rows()));
}

/// Pooled noise estimate: half the lag-one difference covariance.  Lag
/// differences cancel the segment means, so this stays a valid noise
/// covariance estimate whether or not the mean changes.
inline Eigen::MatrixXd pooled_noise_matrix(const FunctionalSample& sample) {
    const Eigen::MatrixXd& c = sample.coeffs();
    const Eigen::Index n = c.rows();
    const Eigen::MatrixXd diffs = c.bottomRows(n - 1) - c.topRows(n - 1);
    return symmetric_part(diffs.transpose() * diffs / (2.0 * static_cast<double>(n)));
}

/// Symmetric inverse square root of a PSD matrix, with eigenvalues floored
/// at floor_rel times the largest before inversion.
inline Eigen::MatrixXd inverse_sqrt_psd(const Eigen::MatrixXd& matrix, double floor_rel = 1e-12) {
    if (!(floor_rel > 0.0)) throw DomainError("floor_rel must be positive");
    const SymEig eig = sym_eig(matrix);
    const double top = eig.values(0);
    if (!(top > 0.0))
        throw DegenerateVarianceError("variance matrix has no positive eigenvalue");
    const Eigen::VectorXd floored = eig.values.cwiseMax(floor_rel * top);
    return symmetric_part(eig.vectors * floored.cwiseSqrt().cwiseInverse().asDiagonal() *
                          eig.vectors.transpose());
}

/// TRR dimension estimate: the largest k whose ridged consecutive-eigenvalue
/// ratio (lambda_{k+1} + ridge) / (lambda_k + ridge) is at most tau1, after
/// flooring negative eigenvalues at zero.  Returns 0 when no k qualifies.
inline int trr_dimension(const Eigen::VectorXd& eigenvalues, const TrrParams& params) {
    params.validate();
    const Eigen::Index d = eigenvalues.size();
    if (d < 2) throw DomainError("TRR needs at least 2 eigenvalues");
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        const double slack = 1e-12 * std::max(1.0, std::abs(eigenvalues(k)));
        if (eigenvalues(k) < eigenvalues(k + 1) - slack)
            throw DomainError("eigenvalues must be sorted in descending order");
    }
    const Eigen::VectorXd floored = eigenvalues.cwiseMax(0.0);
    int q = 0;
    for (Eigen::Index k = 1; k < d; ++k) {
        const double ratio = (floored(k) + params.ridge) / (floored(k - 1) + params.ridge);
        if (ratio <= params.tau1) q = static_cast<int>(k);
    }
    return q;
}

/// Project the sample onto the leading q eigenvector columns.
inline Eigen::MatrixXd reduce(const FunctionalSample& sample, const Eigen::MatrixXd& eigenvectors,
                              int q) {
    if (q < 1) throw EmptyReductionError("selected dimension is zero; nothing to reduce");
    if (eigenvectors.rows() != sample.dim() || q > eigenvectors.cols())
        throw DomainError("eigenvector matrix does not match the sample dimension");
    return sample.coeffs() * eigenvectors.leftCols(q);
}

/// Fitted reduction.  The target matrix is whitened by the pooled noise
/// (noise^{-1/2} A noise^{-1/2}) before the spectrum is read: the whitened
/// spectrum is scale-free, so one ridge tuning works across noise laws and
/// coordinate scalings.  The estimate is indefinite, so eigenpairs are
/// ordered by eigenvalue magnitude; `eigenvalues` holds those magnitudes,
/// descending, and `eigenvectors` the matching orthonormal columns.
/// `reduced` is the n x q_hat projection of the noise-whitened coefficients
/// onto the leading columns (zero columns when q_hat == 0, which reads as
/// "no change signal").
struct AdsModel {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    int q_hat = 0;
    Eigen::MatrixXd reduced;
};

inline AdsModel fit_ads(const FunctionalSample& sample, const TrrParams& params) {
    if (sample.size() < 4) throw InsufficientDataError("fitting needs at least 4 observations");
    const Eigen::MatrixXd whitener = inverse_sqrt_psd(pooled_noise_matrix(sample));
    const Eigen::MatrixXd whitened = symmetric_part(whitener * target_matrix(sample) * whitener);
    const SymEig eig = sym_eig(whitened);

    const Eigen::Index d = eig.values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&eig](Eigen::Index a, Eigen::Index b) {
        return std::abs(eig.values(a)) > std::abs(eig.values(b));
    });

    AdsModel model;
    model.eigenvalues.resize(d);
    model.eigenvectors.resize(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        model.eigenvalues(j) = std::abs(eig.values(order[static_cast<std::size_t>(j)]));
        model.eigenvectors.col(j) = eig.vectors.col(order[static_cast<std::size_t>(j)]);
    }
    model.q_hat = trr_dimension(model.eigenvalues, params);
    model.reduced = model.q_hat > 0
                        ? Eigen::MatrixXd((sample.coeffs() * whitener) *
                                          model.eigenvectors.leftCols(model.q_hat))
                        : Eigen::MatrixXd(sample.size(), 0);
    return model;
}

inline AdsModel fit_ads(const FunctionalSample& sample) {
    return fit_ads(sample, TrrParams::defaults(sample.size()));
}

} // namespace adscp
