#pragma once

// CSV and JSON serialization for curves, simulation reports and study lists,
// plus the readers that make every CLI output round-trippable.

#include "bff/curve.hpp"
#include "bff/error.hpp"
#include "bff/meta.hpp"
#include "bff/sim.hpp"

#include <json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace bff::io {

using json = nlohmann::json;

// Full-precision decimal form; parses back to the identical double.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s, std::size_t row) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw ParseError("expected a number, got '" + s + "'", row);
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

// ---- BFF curves ----

inline void write_curve_csv(const BFFCurve& c, std::ostream& os) {
    os << "omega,log_bf10\n";
    for (const auto& p : c.points) os << fmt(p.omega) << ',' << fmt(p.log_bf10) << '\n';
}

inline std::vector<BFFPoint> read_curve_csv(std::istream& is) {
    std::vector<BFFPoint> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        if (row == 1 && line.rfind("omega", 0) == 0) continue;
        const auto f = split_csv_line(line);
        if (f.size() < 2) throw ParseError("curve row needs omega,log_bf10", row);
        BFFPoint p;
        p.omega = parse_double(f[0], row);
        p.log_bf10 = parse_double(f[1], row);
        p.ok = !std::isnan(p.log_bf10);
        out.push_back(p);
    }
    return out;
}

inline json curve_to_json(const BFFCurve& c) {
    json j;
    j["family"] = family_name(c.family.kind);
    j["df1"] = c.family.df1;
    j["df2"] = c.family.df2;
    j["row"] = test_row_name(c.row);
    j["statistic"] = c.statistic;
    j["nu"] = c.nu;
    j["n1"] = c.sample.n1;
    j["n2"] = c.sample.n2;
    j["n_eff"] = c.n_eff;
    j["omega_min"] = c.omega_min;
    j["constrained_max"] = {{"omega", c.constrained_max.omega},
                            {"log_bf10", c.constrained_max.log_bf10}};
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back({p.omega, p.log_bf10});
    j["points"] = pts;
    if (!c.notes.empty()) j["notes"] = c.notes;
    return j;
}

inline std::vector<BFFPoint> curve_points_from_json(const json& j) {
    std::vector<BFFPoint> out;
    for (const auto& pair : j.at("points")) {
        BFFPoint p;
        p.omega = pair.at(0).get<double>();
        p.log_bf10 = pair.at(1).get<double>();
        p.ok = !std::isnan(p.log_bf10);
        out.push_back(p);
    }
    return out;
}

// ---- Simulation reports ----

inline void write_report_csv(const SimReport& r, std::ostream& os) {
    os << "method,n,omega,mean_woe,se,replicates,errors\n";
    for (const auto& c : r.cells)
        os << sim_method_name(c.method) << ',' << c.n << ',' << fmt(c.omega) << ','
           << fmt(c.mean_woe) << ',' << fmt(c.se) << ',' << c.replicates << ','
           << c.errors << '\n';
}

struct ReportRow {
    std::string method;
    int n = 0;
    double omega = 0.0;
    double mean_woe = 0.0;
    double se = 0.0;
    long replicates = 0;
    long errors = 0;
};

inline std::vector<ReportRow> read_report_csv(std::istream& is) {
    std::vector<ReportRow> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        if (row == 1 && line.rfind("method", 0) == 0) continue;
        const auto f = split_csv_line(line);
        if (f.size() < 7) throw ParseError("report row needs 7 fields", row);
        ReportRow r;
        r.method = f[0];
        r.n = static_cast<int>(parse_double(f[1], row));
        r.omega = parse_double(f[2], row);
        r.mean_woe = parse_double(f[3], row);
        r.se = parse_double(f[4], row);
        r.replicates = static_cast<long>(parse_double(f[5], row));
        r.errors = static_cast<long>(parse_double(f[6], row));
        out.push_back(r);
    }
    return out;
}

inline void write_scatter_csv(const SimReport& r, std::ostream& os) {
    os << "n,omega,ideal_woe,bff_max_woe\n";
    for (const auto& s : r.scatter)
        os << s.n << ',' << fmt(s.omega) << ',' << fmt(s.ideal) << ',' << fmt(s.bff_max)
           << '\n';
}

inline std::vector<ScatterPoint> read_scatter_csv(std::istream& is) {
    std::vector<ScatterPoint> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        if (row == 1 && line.rfind("n,", 0) == 0) continue;
        const auto f = split_csv_line(line);
        if (f.size() < 4) throw ParseError("scatter row needs 4 fields", row);
        ScatterPoint s;
        s.n = static_cast<int>(parse_double(f[0], row));
        s.omega = parse_double(f[1], row);
        s.ideal = parse_double(f[2], row);
        s.bff_max = parse_double(f[3], row);
        out.push_back(s);
    }
    return out;
}

inline json report_to_json(const SimReport& r) {
    json j;
    j["family"] = family_name(r.config.family);
    j["seed"] = r.config.seed;
    j["replicates"] = r.config.replicates;
    j["nu"] = r.config.nu;
    j["null_data"] = r.config.null_data;
    json cells = json::array();
    for (const auto& c : r.cells)
        cells.push_back({{"method", sim_method_name(c.method)},
                         {"n", c.n},
                         {"omega", c.omega},
                         {"mean_woe", c.mean_woe},
                         {"se", c.se},
                         {"replicates", c.replicates},
                         {"errors", c.errors}});
    j["cells"] = cells;
    return j;
}

// ---- Studies ----

inline void write_studies_csv(const std::vector<StudyRecord>& studies, std::ostream& os) {
    os << "r,n\n";
    for (const auto& s : studies) os << fmt(s.r_hat) << ',' << s.n << '\n';
}

// ---- D_EP tables ----

struct DepRow {
    double index_value = 0.0;
    double dep_null_vs_a = 0.0;
    double dep_null_vs_b = 0.0;
};

inline void write_dep_csv(const std::vector<DepRow>& rows, std::ostream& os) {
    os << "index_value,dep_null_vs_a,dep_null_vs_b\n";
    for (const auto& r : rows)
        os << fmt(r.index_value) << ',' << fmt(r.dep_null_vs_a) << ','
           << fmt(r.dep_null_vs_b) << '\n';
}

inline std::vector<DepRow> read_dep_csv(std::istream& is) {
    std::vector<DepRow> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        if (row == 1 && line.rfind("index_value", 0) == 0) continue;
        const auto f = split_csv_line(line);
        if (f.size() < 3) throw ParseError("dep row needs 3 fields", row);
        out.push_back({parse_double(f[0], row), parse_double(f[1], row),
                       parse_double(f[2], row)});
    }
    return out;
}

} // namespace bff::io
