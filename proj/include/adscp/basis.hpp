#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "adscp/errors.hpp"

namespace adscp {

/// Shared observation grid: strictly increasing points inside [0, 1].
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> points) : points_(std::move(points)) {
        if (points_.size() < 2) throw DomainError("time grid needs at least 2 points");
        for (std::size_t j = 0; j < points_.size(); ++j) {
            const double t = points_[j];
            if (!std::isfinite(t) || t < 0.0 || t > 1.0)
                throw DomainError("time grid points must lie in [0, 1]");
            if (j > 0 && points_[j - 1] >= t)
                throw DomainError("time grid must be strictly increasing");
        }
    }

    /// m equally spaced points covering [0, 1], endpoints included.
    static TimeGrid uniform(std::size_t m) {
        if (m < 2) throw DomainError("time grid needs at least 2 points");
        std::vector<double> pts(m);
        for (std::size_t j = 0; j < m; ++j)
            pts[j] = static_cast<double>(j) / static_cast<double>(m - 1);
        return TimeGrid(std::move(pts));
    }

    const std::vector<double>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t j) const { return points_[j]; }

private:
    std::vector<double> points_;
};

/// Fourier basis on [0, 1]: phi_1(t) = 1, phi_{2k}(t) = sqrt(2) cos(2 pi k t),
/// phi_{2k+1}(t) = sqrt(2) sin(2 pi k t).  The size is odd so sine/cosine
/// terms pair up around the constant.
class BasisSpec {
public:
    explicit BasisSpec(int size = 21) : size_(size) {
        if (size < 1 || size % 2 == 0)
            throw DomainError("basis size must be a positive odd integer");
    }

    int size() const noexcept { return size_; }
    int harmonics() const noexcept { return (size_ - 1) / 2; }

private:
    int size_;
};

/// n functional observations stored as basis coefficients, one row each.
/// This is the carrier type between all modules; curves only materialize
/// on a grid through reconstruct().
class FunctionalSample {
public:
    FunctionalSample(Eigen::MatrixXd coeffs, BasisSpec basis)
        : coeffs_(std::move(coeffs)), basis_(basis) {
        if (coeffs_.rows() < 2)
            throw InsufficientDataError("a functional sample needs at least 2 observations");
        if (coeffs_.cols() != basis_.size())
            throw DomainError("coefficient columns must match the basis size");
        if (!coeffs_.allFinite())
            throw DomainError("coefficients must all be finite");
    }

    const Eigen::MatrixXd& coeffs() const noexcept { return coeffs_; }
    const BasisSpec& basis() const noexcept { return basis_; }
    Eigen::Index size() const noexcept { return coeffs_.rows(); }
    int dim() const noexcept { return basis_.size(); }

private:
    Eigen::MatrixXd coeffs_;
    BasisSpec basis_;
};

/// Design matrix of the basis on a grid; entry (j, d) = phi_{d+1}(t_j).
inline Eigen::MatrixXd evaluate_basis(const BasisSpec& spec, const TimeGrid& grid) {
    const auto m = static_cast<Eigen::Index>(grid.size());
    const int d = spec.size();
    Eigen::MatrixXd design(m, d);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double t = grid[static_cast<std::size_t>(j)];
        design(j, 0) = 1.0;
        for (int k = 1; 2 * k < d; ++k) {
            const double angle = 2.0 * std::numbers::pi * k * t;
            design(j, 2 * k - 1) = std::numbers::sqrt2 * std::cos(angle);
            design(j, 2 * k) = std::numbers::sqrt2 * std::sin(angle);
        }
    }
    return design;
}

/// Least-squares projection of grid observations onto the basis.  Rows of
/// `values` are observations sampled on `grid`.  Rejects designs whose
/// condition number exceeds 1e12.
inline FunctionalSample project(const Eigen::MatrixXd& values, const BasisSpec& spec,
                                const TimeGrid& grid) {
    const auto m = static_cast<Eigen::Index>(grid.size());
    if (values.cols() != m)
        throw DomainError("each observation needs one value per grid point");
    if (m < spec.size())
        throw DomainError("under-determined projection: fewer grid points than basis functions");
    const Eigen::MatrixXd design = evaluate_basis(spec, grid);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    if (!(smallest > 0.0) || sv(0) / smallest > 1e12)
        throw ConditioningError("projection design matrix is too ill-conditioned");
    Eigen::MatrixXd coeffs = svd.solve(values.transpose()).transpose();
    return FunctionalSample(std::move(coeffs), spec);
}

/// Evaluate every observation on a grid: entry (i, j) = C_i . phi(t_j).
inline Eigen::MatrixXd reconstruct(const FunctionalSample& sample, const TimeGrid& grid) {
    return sample.coeffs() * evaluate_basis(sample.basis(), grid).transpose();
}

} // namespace adscp
