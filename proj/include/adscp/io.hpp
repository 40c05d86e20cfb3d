#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adscp/ads.hpp"
#include "adscp/basis.hpp"
#include "adscp/cptest.hpp"
#include "adscp/errors.hpp"
#include "adscp/mpulse.hpp"
#include "adscp/simlab.hpp"

namespace adscp {

/// Decimal form of a double that parses back to the same bits
/// (17 significant digits).
inline std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

inline double parse_number(const std::string& field, std::size_t line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError("expected a number, got \"" + field + "\"", line_no);
    return value;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open output file: " + path);
    return out;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path, 0);
    return in;
}

} // namespace detail

/// Coefficient CSV: header c1..cD, one observation per row.
inline void write_coeff_csv(const std::string& path, const Eigen::MatrixXd& coeffs) {
    std::ofstream out = detail::open_output(path);
    for (Eigen::Index j = 0; j < coeffs.cols(); ++j)
        out << (j ? "," : "") << 'c' << j + 1;
    out << '\n';
    for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
        for (Eigen::Index j = 0; j < coeffs.cols(); ++j)
            out << (j ? "," : "") << format_double(coeffs(i, j));
        out << '\n';
    }
}

inline Eigen::MatrixXd read_coeff_csv(const std::string& path) {
    std::ifstream in = detail::open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file", 1);
    const std::vector<std::string> header = detail::split_fields(line);
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] != "c" + std::to_string(j + 1))
            throw ParseError("expected coefficient header c1..cD", 1);
    const std::size_t d = header.size();
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = detail::split_fields(line);
        if (fields.size() != d)
            throw ParseError("expected " + std::to_string(d) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        std::vector<double> row(d);
        for (std::size_t j = 0; j < d; ++j) row[j] = detail::parse_number(fields[j], line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no data rows", line_no);
    Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < d; ++j)
            coeffs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return coeffs;
}

/// Grid CSV: first row is "t" followed by the grid values; every later row
/// holds one observation's values on that grid.
inline void write_grid_csv(const std::string& path, const TimeGrid& grid,
                           const Eigen::MatrixXd& values) {
    if (values.cols() != static_cast<Eigen::Index>(grid.size()))
        throw DomainError("values must have one column per grid point");
    std::ofstream out = detail::open_output(path);
    out << 't';
    for (double t : grid.points()) out << ',' << format_double(t);
    out << '\n';
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            out << (j ? "," : "") << format_double(values(i, j));
        out << '\n';
    }
}

inline std::pair<TimeGrid, Eigen::MatrixXd> read_grid_csv(const std::string& path) {
    std::ifstream in = detail::open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file", 1);
    const std::vector<std::string> header = detail::split_fields(line);
    if (header.size() < 3 || header[0] != "t")
        throw ParseError("expected header \"t\" followed by grid values", 1);
    std::vector<double> grid_points(header.size() - 1);
    for (std::size_t j = 1; j < header.size(); ++j)
        grid_points[j - 1] = detail::parse_number(header[j], 1);
    TimeGrid grid(std::move(grid_points));
    const std::size_t m = grid.size();
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = detail::split_fields(line);
        if (fields.size() != m)
            throw ParseError("expected " + std::to_string(m) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        std::vector<double> row(m);
        for (std::size_t j = 0; j < m; ++j) row[j] = detail::parse_number(fields[j], line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no data rows", line_no);
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < m; ++j)
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return {std::move(grid), std::move(values)};
}

/// Reduced-data CSV for plotting: header f1..fq.
inline void write_reduced_csv(const std::string& path, const Eigen::MatrixXd& reduced) {
    std::ofstream out = detail::open_output(path);
    for (Eigen::Index j = 0; j < reduced.cols(); ++j) out << (j ? "," : "") << 'f' << j + 1;
    out << '\n';
    for (Eigen::Index i = 0; i < reduced.rows(); ++i) {
        for (Eigen::Index j = 0; j < reduced.cols(); ++j)
            out << (j ? "," : "") << format_double(reduced(i, j));
        out << '\n';
    }
}

/// Eigenvalue scree CSV: columns index,eigenvalue.
inline void write_scree_csv(const std::string& path, const Eigen::VectorXd& eigenvalues) {
    std::ofstream out = detail::open_output(path);
    out << "index,eigenvalue\n";
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j)
        out << j + 1 << ',' << format_double(eigenvalues(j)) << '\n';
}

/// Pulse statistic CSV: columns i,S over scan positions.
inline void write_s_series_csv(const std::string& path, const Eigen::VectorXd& s) {
    std::ofstream out = detail::open_output(path);
    out << "i,S\n";
    for (Eigen::Index i = 0; i < s.size(); ++i)
        out << i + 1 << ',' << format_double(s(i)) << '\n';
}

inline nlohmann::json to_json(const AdsModel& model) {
    nlohmann::json j;
    j["eigenvalues"] = std::vector<double>(model.eigenvalues.begin(), model.eigenvalues.end());
    j["q_hat"] = model.q_hat;
    std::vector<double> vectors;
    vectors.reserve(static_cast<std::size_t>(model.eigenvectors.size()));
    for (Eigen::Index r = 0; r < model.eigenvectors.rows(); ++r)
        for (Eigen::Index c = 0; c < model.eigenvectors.cols(); ++c)
            vectors.push_back(model.eigenvectors(r, c));
    j["eigenvectors"] = std::move(vectors);
    nlohmann::json reduced = nlohmann::json::array();
    for (Eigen::Index i = 0; i < model.reduced.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < model.reduced.cols(); ++c) row.push_back(model.reduced(i, c));
        reduced.push_back(std::move(row));
    }
    j["reduced"] = std::move(reduced);
    return j;
}

inline nlohmann::json to_json(const TestResult& result) {
    nlohmann::json j;
    j["statistic"] = result.statistic;
    j["p_value"] = result.p_value;
    j["reject"] = result.reject;
    j["direction"] = std::vector<double>(result.direction.begin(), result.direction.end());
    return j;
}

inline nlohmann::json to_json(const MpulseResult& result) {
    nlohmann::json j;
    j["q_hat"] = result.q_hat;
    j["k_hat"] = result.k_hat;
    j["locations"] = result.locations;
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& [lo, hi] : result.intervals) intervals.push_back({lo, hi});
    j["intervals"] = std::move(intervals);
    return j;
}

inline nlohmann::json to_json(const GroundTruth& truth, int n) {
    nlohmann::json j;
    j["n"] = n;
    j["k"] = truth.change_points.size();
    j["change_points"] = truth.change_points;
    return j;
}

/// Benchmark report CSV.  Rate rows: distribution,D_c,u,rate.  Estimation
/// rows: distribution,D_c,u,k_hat_mean,k_hat_rmse,rand_index_mean.
inline void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    if (rows.empty()) return;
    const bool rate_table = rows.front().kind == MetricKind::rejection_rate;
    out << (rate_table ? "distribution,D_c,u,rate"
                       : "distribution,D_c,u,k_hat_mean,k_hat_rmse,rand_index_mean")
        << '\n';
    for (const ReportRow& row : rows) {
        out << row.distribution << ',' << row.shift_support << ',' << format_double(row.shift);
        if (rate_table)
            out << ',' << format_double(row.rate);
        else
            out << ',' << format_double(row.k_mean) << ',' << format_double(row.k_rmse) << ','
                << format_double(row.ri_mean);
        out << '\n';
    }
}

} // namespace adscp
