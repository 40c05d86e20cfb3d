#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "adscp/ads.hpp"
#include "adscp/basis.hpp"
#include "adscp/errors.hpp"

namespace adscp {

/// Tuning for the MPULSE ridge-ratio scan.
struct MpulseParams {
    int window = 0;      ///< block length alpha_n
    double ridge = 0.0;  ///< additive ridge, keeps near-0/0 ratios stable
    double tau2 = 0.5;   ///< interval threshold, in (0, 1)

    /// Recommended tuning for a sequence of length n:
    /// window = floor(n^0.6), ridge = 0.25 sqrt(log(n) / window), tau2 = 0.5.
    static MpulseParams defaults(Eigen::Index n) {
        if (n < 2) throw InsufficientDataError("MPULSE defaults need n >= 2");
        const double nn = static_cast<double>(n);
        const int window = static_cast<int>(std::floor(std::pow(nn, 0.6)));
        return {window, 0.25 * std::sqrt(std::log(nn) / window), 0.5};
    }

    void validate() const {
        if (window < 1) throw DomainError("window must be positive");
        if (!(ridge > 0.0)) throw DomainError("ridge must be positive");
        if (!(tau2 > 0.0 && tau2 < 1.0)) throw DomainError("tau2 must lie in (0, 1)");
    }
};

/// Per-dimension difference of adjacent block means: scan position i
/// (1-based) compares the mean over [i, i+w) against [i+w, i+2w).
/// Prefix sums keep this O(n q).
inline Eigen::MatrixXd mosum_difference(const Eigen::MatrixXd& reduced, int window) {
    if (window < 1) throw DomainError("window must be positive");
    const Eigen::Index n = reduced.rows();
    const Eigen::Index q = reduced.cols();
    const Eigen::Index w = window;
    if (n < 2 * w) throw WindowError("window too large: need at least 2*window observations");
    Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(n + 1, q);
    for (Eigen::Index i = 0; i < n; ++i) prefix.row(i + 1) = prefix.row(i) + reduced.row(i);
    const Eigen::Index count = n - 2 * w + 1;
    Eigen::MatrixXd diff(count, q);
    for (Eigen::Index i = 0; i < count; ++i)
        diff.row(i) =
            (2.0 * prefix.row(i + w) - prefix.row(i) - prefix.row(i + 2 * w)) / static_cast<double>(w);
    return diff;
}

/// Moving average of the block differences over the next `window` scan
/// positions.
inline Eigen::MatrixXd smooth_difference(const Eigen::MatrixXd& diffs, int window) {
    if (window < 1) throw DomainError("window must be positive");
    const Eigen::Index p = diffs.rows();
    const Eigen::Index w = window;
    if (p < w) throw WindowError("window too large: not enough difference positions to smooth");
    Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(p + 1, diffs.cols());
    for (Eigen::Index i = 0; i < p; ++i) prefix.row(i + 1) = prefix.row(i) + diffs.row(i);
    Eigen::MatrixXd smooth(p - w + 1, diffs.cols());
    for (Eigen::Index i = 0; i < smooth.rows(); ++i)
        smooth.row(i) = (prefix.row(i + w) - prefix.row(i)) / static_cast<double>(w);
    return smooth;
}

/// Ridge-ratio pulse statistic: position i compares the smoothed magnitude
/// now against the value floor(1.5 * window) positions ahead, minimized
/// over dimensions.  Local minima sit 3 * window before a change point.
inline Eigen::VectorXd pulse_statistic(const Eigen::MatrixXd& smoothed,
                                       const MpulseParams& params) {
    params.validate();
    if (smoothed.cols() < 1) throw DomainError("pulse statistic needs at least one dimension");
    const Eigen::Index lag = (3 * static_cast<Eigen::Index>(params.window)) / 2;
    const Eigen::Index count = smoothed.rows() - lag;
    if (count < 1) throw WindowError("window too large: empty scan range");
    Eigen::VectorXd s(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index l = 0; l < smoothed.cols(); ++l) {
            const double ratio = (std::abs(smoothed(i, l)) + params.ridge) /
                                 (std::abs(smoothed(i + lag, l)) + params.ridge);
            best = std::min(best, ratio);
        }
        s(i) = best;
    }
    return s;
}

/// Maximal runs of consecutive scan positions with S < tau2, as 1-based
/// inclusive (start, end) pairs in scan order.
inline std::vector<std::pair<int, int>> threshold_intervals(const Eigen::VectorXd& s,
                                                            double tau2) {
    if (!s.allFinite()) throw DomainError("pulse statistic must be finite");
    std::vector<std::pair<int, int>> runs;
    int start = 0;  // 1-based start of the open run, 0 when outside
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) < tau2) {
            if (start == 0) start = static_cast<int>(i) + 1;
        } else if (start != 0) {
            runs.emplace_back(start, static_cast<int>(i));
            start = 0;
        }
    }
    if (start != 0) runs.emplace_back(start, static_cast<int>(s.size()));
    return runs;
}

/// Change point locations: per interval the argmin of S over the run (ties
/// to the smallest index), shifted forward by 3 * window.
inline std::vector<int> locate_changes(const Eigen::VectorXd& s,
                                       const std::vector<std::pair<int, int>>& intervals,
                                       int window) {
    std::vector<int> locations;
    locations.reserve(intervals.size());
    for (const auto& [lo, hi] : intervals) {
        if (lo < 1 || hi > s.size() || lo > hi) throw DomainError("interval out of scan range");
        int best = lo;
        for (int i = lo + 1; i <= hi; ++i)
            if (s(i - 1) < s(best - 1)) best = i;
        locations.push_back(best + 3 * window);
    }
    return locations;
}

/// Output of the detection pipeline.
struct MpulseResult {
    Eigen::VectorXd s_series;                    ///< S at scan positions 1..len
    std::vector<std::pair<int, int>> intervals;  ///< runs with S < tau2
    std::vector<int> locations;                  ///< estimated change points, ascending
    int k_hat = 0;                               ///< number of change points found
    int q_hat = 0;                               ///< reduced dimension driving the scan
};

/// Full detection pipeline: fit the reduction, then scan the reduced
/// sequence.  A selected dimension of zero short-circuits to "no change
/// points".
inline MpulseResult detect_changes(const FunctionalSample& sample, const TrrParams& trr,
                                   const MpulseParams& params) {
    params.validate();
    MpulseResult out;
    const AdsModel model = fit_ads(sample, trr);
    out.q_hat = model.q_hat;
    if (model.q_hat == 0) return out;
    const Eigen::MatrixXd diffs = mosum_difference(model.reduced, params.window);
    const Eigen::MatrixXd smoothed = smooth_difference(diffs, params.window);
    out.s_series = pulse_statistic(smoothed, params);
    out.intervals = threshold_intervals(out.s_series, params.tau2);
    out.locations = locate_changes(out.s_series, out.intervals, params.window);
    out.k_hat = static_cast<int>(out.locations.size());
    return out;
}

inline MpulseResult detect_changes(const FunctionalSample& sample) {
    return detect_changes(sample, TrrParams::defaults(sample.size()),
                          MpulseParams::defaults(sample.size()));
}

} // namespace adscp
