#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "adscp/basis.hpp"
#include "adscp/cptest.hpp"
#include "adscp/errors.hpp"
#include "adscp/mpulse.hpp"
#include "adscp/rng.hpp"

namespace adscp {

enum class NoiseLaw { gaussian, student_t4 };

inline const char* to_string(NoiseLaw law) {
    return law == NoiseLaw::gaussian ? "gaussian" : "t4";
}

inline NoiseLaw parse_noise_law(const std::string& name) {
    if (name == "gaussian") return NoiseLaw::gaussian;
    if (name == "t4") return NoiseLaw::student_t4;
    throw DomainError("unknown noise law: " + name);
}

inline void validate_change_points(const std::vector<int>& change_points, int n) {
    int prev = 0;
    for (int z : change_points) {
        if (z <= prev || z >= n)
            throw DomainError("change points must be strictly increasing inside (0, n)");
        prev = z;
    }
}

/// Synthetic data-generating process: alternating mean shifts over a
/// Fourier basis with geometrically decaying coordinate variances.
struct SimConfig {
    int n = 0;                       ///< sample size
    int basis_size = 21;             ///< number of basis functions (odd)
    std::vector<int> change_points;  ///< strictly increasing, inside (0, n)
    double shift = 0.0;              ///< mean shift magnitude u
    int shift_support = 1;           ///< leading coordinates carrying the shift
    NoiseLaw noise = NoiseLaw::gaussian;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 2) throw DomainError("sample size must be at least 2");
        if (basis_size < 1 || basis_size % 2 == 0)
            throw DomainError("basis size must be a positive odd integer");
        if (shift_support < 1 || shift_support > basis_size)
            throw DomainError("shift support must lie in [1, basis size]");
        if (!std::isfinite(shift)) throw DomainError("shift must be finite");
        validate_change_points(change_points, n);
    }
};

/// True segmentation backing a generated sample.
struct GroundTruth {
    std::vector<int> change_points;
};

/// Segment label (0-based) of each observation 1..n.
inline std::vector<int> segment_labels(const std::vector<int>& change_points, int n) {
    validate_change_points(change_points, n);
    std::vector<int> labels(static_cast<std::size_t>(n));
    int segment = 0;
    std::size_t next = 0;
    for (int i = 1; i <= n; ++i) {
        if (next < change_points.size() && i > change_points[next]) {
            ++segment;
            ++next;
        }
        labels[static_cast<std::size_t>(i - 1)] = segment;
    }
    return labels;
}

/// Generate one sample.  Even segments (the first is segment 0) carry the
/// shifted mean, odd segments are mean zero.  Coordinate l has standard
/// deviation 2^{-l/2}, l = 1..D; Student-t draws are used raw.  Output is
/// fully determined by the seed.
inline FunctionalSample generate(const SimConfig& config) {
    config.validate();
    const int d = config.basis_size;
    Eigen::VectorXd scale(d);
    for (int l = 1; l <= d; ++l) scale(l - 1) = std::pow(2.0, -0.5 * l);
    Eigen::VectorXd shifted_mean = Eigen::VectorXd::Zero(d);
    shifted_mean.head(config.shift_support).setConstant(config.shift);

    std::mt19937_64 engine = make_engine(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::student_t_distribution<double> student(4.0);
    const bool is_gaussian = config.noise == NoiseLaw::gaussian;

    const std::vector<int> labels = segment_labels(config.change_points, config.n);
    Eigen::MatrixXd coeffs(config.n, d);
    for (int i = 0; i < config.n; ++i) {
        const bool shifted = labels[static_cast<std::size_t>(i)] % 2 == 0;
        for (int l = 0; l < d; ++l) {
            const double z = is_gaussian ? gauss(engine) : student(engine);
            coeffs(i, l) = (shifted ? shifted_mean(l) : 0.0) + scale(l) * z;
        }
    }
    return FunctionalSample(std::move(coeffs), BasisSpec(d));
}

/// Pair-counting agreement in [0, 1] between the segmentations of 1..n
/// induced by two change point lists.
inline double rand_index(const std::vector<int>& a, const std::vector<int>& b, int n) {
    if (n < 2) throw DomainError("rand index needs at least 2 observations");
    validate_change_points(a, n);
    validate_change_points(b, n);
    const auto pairs_within = [n](const std::vector<int>& cps) {
        std::int64_t total = 0;
        int prev = 0;
        for (std::size_t k = 0; k <= cps.size(); ++k) {
            const int end = k < cps.size() ? cps[k] : n;
            const std::int64_t len = end - prev;
            total += len * (len - 1) / 2;
            prev = end;
        }
        return total;
    };
    std::vector<int> merged;
    merged.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    const std::int64_t same_a = pairs_within(a);
    const std::int64_t same_b = pairs_within(b);
    const std::int64_t same_both = pairs_within(merged);
    const std::int64_t total = static_cast<std::int64_t>(n) * (n - 1) / 2;
    const std::int64_t agree = total - same_a - same_b + 2 * same_both;
    return static_cast<double>(agree) / static_cast<double>(total);
}

inline double rand_index(const GroundTruth& truth, const std::vector<int>& estimate, int n) {
    return rand_index(truth.change_points, estimate, n);
}

/// Mean and root-mean-square error of estimated change point counts.
struct CountStats {
    double mean = 0.0;
    double rmse = 0.0;
};

inline CountStats khat_stats(const std::vector<int>& estimates, int true_k) {
    if (estimates.empty()) throw DomainError("need at least one replication");
    double sum = 0.0;
    double sq = 0.0;
    for (int k : estimates) {
        sum += k;
        const double err = k - true_k;
        sq += err * err;
    }
    const double m = static_cast<double>(estimates.size());
    return {sum / m, std::sqrt(sq / m)};
}

/// Raw test statistics over seeded replications; replication r runs on
/// seed base + r, so results do not depend on execution order.
inline std::vector<double> collect_statistics(const SimConfig& config, int reps) {
    if (reps < 1) throw DomainError("need at least one replication");
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(reps));
    SimConfig cfg = config;
    for (int r = 0; r < reps; ++r) {
        cfg.seed = config.seed + static_cast<std::uint64_t>(r);
        stats.push_back(ads_test(generate(cfg)).statistic);
    }
    return stats;
}

/// Fraction of replications rejecting at `level`; replication r runs on
/// seed base + r.
inline double empirical_rate(const SimConfig& config, int reps, double level) {
    if (reps < 1) throw DomainError("need at least one replication");
    int rejections = 0;
    SimConfig cfg = config;
    for (int r = 0; r < reps; ++r) {
        cfg.seed = config.seed + static_cast<std::uint64_t>(r);
        if (ads_test(generate(cfg), level).reject) ++rejections;
    }
    return static_cast<double>(rejections) / static_cast<double>(reps);
}

enum class MetricKind { rejection_rate, estimation };

/// One cell of a benchmark table.
struct Scenario {
    SimConfig config;
    MetricKind kind = MetricKind::rejection_rate;
    double level = 0.05;
    int true_k = 0;
};

/// One benchmark report row.  Rate rows fill `rate`; estimation rows fill
/// the count/index metrics.  shift_support is 0 on null rows.
struct ReportRow {
    std::string distribution;
    int shift_support = 0;
    double shift = 0.0;
    MetricKind kind = MetricKind::rejection_rate;
    double rate = std::numeric_limits<double>::quiet_NaN();
    double k_mean = std::numeric_limits<double>::quiet_NaN();
    double k_rmse = std::numeric_limits<double>::quiet_NaN();
    double ri_mean = std::numeric_limits<double>::quiet_NaN();
};

/// Benchmark grids.  Tables 1-2: test size/power for one and two change
/// points.  Tables 3-4: estimation metrics for one and two change points.
/// Every scenario shares the base seed, so shift cells reuse one noise
/// stream.
inline std::vector<Scenario> table_scenarios(int table, std::uint64_t seed) {
    if (table < 1 || table > 4) throw DomainError("table must be 1, 2, 3 or 4");
    const bool two_changes = table == 2 || table == 4;
    const int n = two_changes ? 300 : 200;
    const std::vector<int> cps = two_changes ? std::vector<int>{100, 200} : std::vector<int>{100};
    const int true_k = two_changes ? 2 : 1;
    std::vector<Scenario> out;
    for (NoiseLaw law : {NoiseLaw::gaussian, NoiseLaw::student_t4}) {
        if (table <= 2) {
            Scenario null_case;
            null_case.config = {n, 21, {}, 0.0, 1, law, seed};
            null_case.kind = MetricKind::rejection_rate;
            out.push_back(null_case);
            for (int support : {10, 20})
                for (double u : {0.06, 0.08, 0.10}) {
                    Scenario sc;
                    sc.config = {n, 21, cps, u, support, law, seed};
                    sc.kind = MetricKind::rejection_rate;
                    out.push_back(sc);
                }
        } else {
            for (int support : {10, 20})
                for (double u : {0.08, 0.10}) {
                    Scenario sc;
                    sc.config = {n, 21, cps, u, support, law, seed};
                    sc.kind = MetricKind::estimation;
                    sc.true_k = true_k;
                    out.push_back(sc);
                }
        }
    }
    return out;
}

/// Run every scenario for `reps` replications and collect report rows.
inline std::vector<ReportRow> run_grid(const std::vector<Scenario>& scenarios, int reps) {
    if (reps < 1) throw DomainError("need at least one replication");
    std::vector<ReportRow> rows;
    rows.reserve(scenarios.size());
    for (const Scenario& sc : scenarios) {
        ReportRow row;
        row.distribution = to_string(sc.config.noise);
        row.shift = sc.config.shift;
        row.shift_support = sc.config.shift == 0.0 ? 0 : sc.config.shift_support;
        row.kind = sc.kind;
        if (sc.kind == MetricKind::rejection_rate) {
            row.rate = empirical_rate(sc.config, reps, sc.level);
        } else {
            std::vector<int> counts;
            counts.reserve(static_cast<std::size_t>(reps));
            double ri_sum = 0.0;
            SimConfig cfg = sc.config;
            for (int r = 0; r < reps; ++r) {
                cfg.seed = sc.config.seed + static_cast<std::uint64_t>(r);
                const MpulseResult res = detect_changes(generate(cfg));
                counts.push_back(res.k_hat);
                ri_sum += rand_index(cfg.change_points, res.locations, cfg.n);
            }
            const CountStats stats = khat_stats(counts, sc.true_k);
            row.k_mean = stats.mean;
            row.k_rmse = stats.rmse;
            row.ri_mean = ri_sum / static_cast<double>(reps);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace adscp
