#pragma once

// Evidence combination across replicated studies: rescaled Fisher z
// statistics, per-study prior calibration on the same standardized effect,
// and the product-of-Bayes-factors combined BFF.

#include "bff/curve.hpp"
#include "bff/engine.hpp"
#include "bff/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace bff {

struct StudyRecord {
    double r_hat = 0.0;  // sample correlation
    int n = 4;           // per-study sample size, > 3

    static StudyRecord make(double r_hat, int n) {
        StudyRecord s{r_hat, n};
        s.validate();
        return s;
    }
    void validate() const {
        if (!(std::abs(r_hat) < 1.0))
            throw std::domain_error("sample correlation must lie in (-1, 1)");
        if (n <= 3) throw std::domain_error("study sample size must exceed 3");
    }
};

// Rescaled Fisher z: sqrt(n-3)/2 * log((1+r)/(1-r)), asymptotically N(lambda, 1).
inline double fisher_z(const StudyRecord& study) {
    study.validate();
    return 0.5 * std::sqrt(study.n - 3.0) *
           std::log((1.0 + study.r_hat) / (1.0 - study.r_hat));
}

// Standardized effect for a population correlation rho.
inline double omega_of_rho(double rho) {
    if (!(std::abs(rho) < 1.0)) throw std::domain_error("rho must lie in (-1, 1)");
    return 0.5 * std::log((1.0 + rho) / (1.0 - rho));
}

// Per-study inverse-moment dispersion placing the prior mode at
// sqrt(n_i - 3) * omega.
inline double meta_tau(const StudyRecord& study, double omega, double nu) {
    return (study.n - 3.0) * (nu + 1.0) * omega * omega / 2.0;
}

inline TestStatistic meta_statistic(const StudyRecord& study) {
    return TestStatistic::make(StatFamily::z(), fisher_z(study),
                               SampleSpec::one(static_cast<double>(study.n)),
                               TestRow::OneSampleZ);
}

struct CombinedBFF {
    std::vector<BFFCurve> per_study;
    BFFCurve combined;
    double total_n = 0.0;
    double omega_min_combined = 0.0;
};

// Combined evidence across studies: because the non-centrality parameters are
// drawn independently from priors re-centered per study, the joint Bayes
// factor is the product of the per-study Bayes factors, i.e. the combined
// log BFF is the pointwise sum on a shared omega grid.
inline CombinedBFF combined_bff(const std::vector<StudyRecord>& studies, double nu,
                                const GridSpec& grid = {}) {
    if (studies.empty()) throw std::domain_error("combined_bff requires at least one study");
    CombinedBFF out;
    for (const auto& s : studies) {
        s.validate();
        out.total_n += s.n;
    }
    out.omega_min_combined = omega_min(out.total_n);

    auto study_woe = [&](const StudyRecord& s, double w) {
        if (w == 0.0) return 0.0;
        const TestStatistic stat = meta_statistic(s);
        const PriorSpec prior = PriorSpec::inverse_moment(meta_tau(s, w, nu), nu);
        return log_bf10(stat, prior).log_bf10;
    };

    for (const auto& s : studies) {
        auto woe_at = [&](double w) { return study_woe(s, w); };
        BFFCurve c = build_curve(woe_at, static_cast<double>(s.n), grid);
        c.family = StatFamily::z();
        c.row = TestRow::OneSampleZ;
        c.statistic = fisher_z(s);
        c.nu = nu;
        c.sample = SampleSpec::one(static_cast<double>(s.n));
        out.per_study.push_back(std::move(c));
    }

    // Pointwise sum of per-study log Bayes factors on the shared grid.
    BFFCurve& comb = out.combined;
    auto combined_woe = [&](double w) {
        double total = 0.0;
        for (const auto& s : studies) total += study_woe(s, w);
        return total;
    };
    comb.family = StatFamily::z();
    comb.row = TestRow::OneSampleZ;
    comb.nu = nu;
    comb.sample = SampleSpec::one(out.total_n);
    comb.n_eff = out.total_n;
    comb.omega_min = out.omega_min_combined;
    const auto& grid_pts = out.per_study.front().points;
    comb.points.resize(grid_pts.size());
    for (std::size_t i = 0; i < grid_pts.size(); ++i) {
        comb.points[i].omega = grid_pts[i].omega;
        double total = 0.0;
        bool ok = true;
        for (const auto& c : out.per_study) {
            if (!c.points[i].ok) ok = false;
            total += c.points[i].log_bf10;
        }
        comb.points[i].log_bf10 = total;
        comb.points[i].ok = ok;
    }
    comb.constrained_max = detail::constrained_maximum(combined_woe, comb.points,
                                                       comb.omega_min, grid.hi);
    return out;
}

// Reads (r, n) records from CSV; a leading header row is skipped when its
// first field is not numeric.
inline std::vector<StudyRecord> ingest_studies(std::istream& in) {
    std::vector<StudyRecord> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        // Trim whitespace and skip blanks.
        auto is_space = [](unsigned char c) { return std::isspace(c); };
        line.erase(line.begin(), std::find_if_not(line.begin(), line.end(), is_space));
        line.erase(std::find_if_not(line.rbegin(), line.rend(), is_space).base(), line.end());
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string a, b;
        if (!std::getline(fields, a, ',') || !std::getline(fields, b, ','))
            throw ParseError("expected two comma-separated fields (r, n)", row);
        char* end = nullptr;
        const double r = std::strtod(a.c_str(), &end);
        if (end == a.c_str() || *end != '\0') {
            if (row == 1) continue;  // header
            throw ParseError("could not parse correlation '" + a + "'", row);
        }
        const long n = std::strtol(b.c_str(), &end, 10);
        if (end == b.c_str() || *end != '\0')
            throw ParseError("could not parse sample size '" + b + "'", row);
        if (!(std::abs(r) < 1.0))
            throw ParseError("correlation must lie in (-1, 1)", row);
        if (n <= 3) throw ParseError("sample size must exceed 3", row);
        out.push_back(StudyRecord{r, static_cast<int>(n)});
    }
    return out;
}

inline std::vector<StudyRecord> ingest_studies_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open study file: " + path);
    return ingest_studies(in);
}

// The Many Labs 3 persistence-conscientiousness replications: 20 sample
// correlations with their sample sizes.
inline const std::vector<StudyRecord>& manylabs3_persistence() {
    static const std::vector<StudyRecord> data = {
        {-0.211, 84}, {0.008, 117}, {-0.064, 42},  {0.201, 90},  {-0.064, 96},
        {0.020, 314}, {-0.044, 126}, {0.103, 131}, {-0.085, 156}, {-0.140, 101},
        {0.024, 118}, {0.004, 139},  {0.142, 179}, {0.060, 117},  {-0.020, 240},
        {0.164, 137}, {-0.060, 89},  {-0.017, 80}, {-0.001, 177}, {0.000, 95},
    };
    return data;
}

} // namespace bff
