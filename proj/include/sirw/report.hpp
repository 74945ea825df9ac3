#pragma once
// Experiment reports: named statistics with estimates, standard errors,
// targets and verdicts, serialized as CSV with a config-echo header.

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sirw {

inline constexpr const char* kToolVersion = "sirw-lab 0.1.0";

struct ReportRow {
    std::string statistic;
    double coord = 0.0;  // x or t of the statistic, 0 when not applicable
    double estimate = 0.0;
    std::optional<double> se;
    std::optional<double> target_a;
    std::optional<double> target_b;
    std::string verdict;  // "pass", "fail", "info", "inconclusive", ...
};

struct Report {
    std::vector<std::string> header;  // config echo lines
    std::vector<ReportRow> rows;
    std::size_t replicas = 0;
    std::size_t failures = 0;
    double wall_seconds = 0.0;

    void echo(const std::string& line) { header.push_back(line); }

    bool all_pass() const {
        for (const auto& r : rows)
            if (r.verdict == "fail") return false;
        return true;
    }

    const ReportRow& find(const std::string& statistic, double coord = 0.0) const {
        for (const auto& r : rows)
            if (r.statistic == statistic && r.coord == coord) return r;
        throw std::out_of_range("report: no row '" + statistic + "'");
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "# tool: " << kToolVersion << "\n";
        for (const auto& line : header) os << "# " << line << "\n";
        os << "# replicas: " << replicas << ", failures: " << failures << ", wall_seconds: "
           << std::fixed << std::setprecision(2) << wall_seconds << "\n";
        os << "statistic,x_or_t,estimate,se,target_a,target_b,verdict\n";
        os << std::setprecision(10) << std::defaultfloat;
        for (const auto& r : rows) {
            os << r.statistic << "," << r.coord << "," << r.estimate << ",";
            if (r.se) os << *r.se;
            else os << "n/a";
            os << ",";
            if (r.target_a) os << *r.target_a;
            else os << "";
            os << ",";
            if (r.target_b) os << *r.target_b;
            else os << "";
            os << "," << r.verdict << "\n";
        }
        return os.str();
    }

    void write_csv(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("report: cannot open '" + path + "'");
        f << to_csv();
    }
};

}  // namespace sirw
