#pragma once

// Monte Carlo operating characteristics for F(1, n-1) and chi-squared(1)
// tests (plus their z/t analogues): average weight of evidence per method
// under null or alternative data, with seed-reproducible parallel replicates.

#include "bff/curve.hpp"
#include "bff/engine.hpp"
#include "bff/math/rng.hpp"
#include "bff/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace bff {

enum class SimMethod { Ideal, BffCurve, BffMax, GpriorUnit, GpriorRisk, JzsR1, JzsR07 };

inline const char* sim_method_name(SimMethod m) {
    switch (m) {
        case SimMethod::Ideal: return "ideal";
        case SimMethod::BffCurve: return "bff_curve";
        case SimMethod::BffMax: return "bff_max";
        case SimMethod::GpriorUnit: return "gprior_unit";
        case SimMethod::GpriorRisk: return "gprior_risk";
        case SimMethod::JzsR1: return "jzs_r1";
        case SimMethod::JzsR07: return "jzs_r07";
    }
    return "?";
}

struct SimConfig {
    Family family = Family::F;  // F and ChiSq use df1 = 1; Z/T are the dual checks
    std::vector<int> n_values = {50, 100, 150, 200};
    std::vector<double> omega_grid = {0.0};
    int replicates = 10000;
    std::vector<SimMethod> methods = {SimMethod::Ideal,      SimMethod::BffCurve,
                                      SimMethod::BffMax,     SimMethod::GpriorUnit,
                                      SimMethod::GpriorRisk, SimMethod::JzsR1,
                                      SimMethod::JzsR07};
    std::uint64_t seed = 1;
    double nu = 9.0;
    // When set, data are drawn from the central distribution while methods
    // are still indexed by omega (the centering effect of items i-ii).
    bool null_data = false;
    double max_search_step = 0.02;  // grid step of the per-replicate BFF maximum
    double max_search_hi = 1.5;
    unsigned threads = 0;  // 0 = BFF_THREADS or hardware
    bool keep_scatter = true;

    void validate() const {
        if (replicates < 1) throw std::domain_error("replicates must be >= 1");
        if (n_values.empty() || omega_grid.empty())
            throw std::domain_error("need at least one n and one omega");
        for (int n : n_values)
            if (n < 2) throw std::domain_error("n must be >= 2");
        for (double w : omega_grid)
            if (w < 0.0) throw std::domain_error("omega must be >= 0");
        if (methods.empty()) throw std::domain_error("no methods requested");
    }
};

struct SimCell {
    SimMethod method = SimMethod::Ideal;
    int n = 0;
    double omega = 0.0;
    double mean_woe = 0.0;
    double se = 0.0;
    long replicates = 0;
    long errors = 0;
};

struct ScatterPoint {
    int n = 0;
    double omega = 0.0;
    double ideal = 0.0;
    double bff_max = 0.0;
};

struct SimReport {
    SimConfig config;
    std::vector<SimCell> cells;
    std::vector<ScatterPoint> scatter;
};

namespace detail {

inline StatFamily sim_stat_family(Family kind, int n) {
    switch (kind) {
        case Family::Z: return StatFamily::z();
        case Family::T: return StatFamily::t(n - 1);
        case Family::ChiSq: return StatFamily::chisq(1);
        case Family::F: return StatFamily::f(1, n - 1);
    }
    throw std::logic_error("unreachable");
}

inline TestRow sim_row(Family kind) {
    switch (kind) {
        case Family::Z: return TestRow::OneSampleZ;
        case Family::T: return TestRow::OneSampleT;
        case Family::ChiSq: return TestRow::LikelihoodRatio;
        case Family::F: return TestRow::LinearModel;
    }
    throw std::logic_error("unreachable");
}

// Non-centrality implied by the standardized effect: sqrt(n) omega on the
// z/t scale, n omega^2 for chi-squared/F.
inline double sim_lambda(Family kind, int n, double omega) {
    if (kind == Family::Z || kind == Family::T) return std::sqrt(double(n)) * omega;
    return double(n) * omega * omega;
}

// Constrained BFF maximum for one replicate: coarse grid over
// [omega_min, hi] plus golden refinement, hi widened when the observed
// statistic implies a larger effect.
inline double replicate_bff_max(const TestStatistic& stat, double nu, const SimConfig& cfg) {
    const double w_min = omega_min(stat.sample.n1);
    double hi = std::max(cfg.max_search_hi, w_min + cfg.max_search_step);
    const double lam_hat = statistic_peak_lambda(stat);
    if (lam_hat > 0.0) {
        const double w_hat = stat.family.nonnegative_support()
                                 ? std::sqrt(lam_hat / stat.sample.n1)
                                 : lam_hat / std::sqrt(stat.sample.n1);
        hi = std::max(hi, 1.5 * w_hat + 0.1);
    }
    auto woe_at = [&](double w) { return log_bf10_at_effect(stat, w, nu).log_bf10; };
    std::vector<double> ws;
    for (double w = w_min; w <= hi + 1e-12; w += cfg.max_search_step) ws.push_back(w);
    std::vector<double> vals(ws.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        vals[i] = woe_at(ws[i]);
        if (vals[i] > vals[best]) best = i;
    }
    const double lo = best > 0 ? ws[best - 1] : w_min;
    const double up = best + 1 < ws.size() ? ws[best + 1] : ws.back();
    double max_w = vals[best];
    if (up > lo) {
        auto [wm, fm] = roots::golden_max(woe_at, lo, up, 1e-6);
        (void)wm;
        if (fm > max_w) max_w = fm;
    }
    return max_w;
}

} // namespace detail

// Runs the simulation grid. Replicate draws come from streams keyed by
// (seed, n-index, replicate), so results are identical for any thread count
// and, in null-data mode, the same draws underlie every omega cell.
inline SimReport run_sim(const SimConfig& cfg) {
    cfg.validate();
    SimReport report;
    report.config = cfg;
    const auto& methods = cfg.methods;
    const bool want_scatter =
        cfg.keep_scatter &&
        std::find(methods.begin(), methods.end(), SimMethod::Ideal) != methods.end() &&
        std::find(methods.begin(), methods.end(), SimMethod::BffMax) != methods.end();

    for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
        const int n = cfg.n_values[ni];
        const StatFamily fam = detail::sim_stat_family(cfg.family, n);
        const TestRow row = detail::sim_row(cfg.family);
        for (double omega : cfg.omega_grid) {
            const double lambda_center = detail::sim_lambda(cfg.family, n, omega);
            const double lambda_gen = cfg.null_data ? 0.0 : lambda_center;
            const std::size_t m = methods.size();
            std::vector<double> woe(m * cfg.replicates,
                                    std::numeric_limits<double>::quiet_NaN());
            parallel_for(
                cfg.replicates,
                [&](std::size_t rep) {
                    RngStream rng = RngStream::keyed(cfg.seed, ni, rep);
                    const double x = sample(fam, lambda_gen, rng);
                    const TestStatistic stat = TestStatistic::make(
                        fam, x, SampleSpec::one(double(n)), row);
                    for (std::size_t k = 0; k < m; ++k) {
                        double v;
                        try {
                            switch (methods[k]) {
                                case SimMethod::Ideal:
                                    v = log_bf10_ideal(stat, lambda_center).log_bf10;
                                    break;
                                case SimMethod::BffCurve:
                                    v = log_bf10_at_effect(stat, omega, cfg.nu).log_bf10;
                                    break;
                                case SimMethod::BffMax:
                                    v = detail::replicate_bff_max(stat, cfg.nu, cfg);
                                    break;
                                case SimMethod::GpriorUnit:
                                    v = log_bf10_gprior(stat, double(n)).log_bf10;
                                    break;
                                case SimMethod::GpriorRisk:
                                    v = log_bf10_gprior(stat, 1.0).log_bf10;
                                    break;
                                case SimMethod::JzsR1:
                                    v = log_bf10_jzs(stat, 1.0).log_bf10;
                                    break;
                                case SimMethod::JzsR07:
                                    v = log_bf10_jzs(stat, 0.7).log_bf10;
                                    break;
                                default: v = std::numeric_limits<double>::quiet_NaN();
                            }
                        } catch (const NumericError&) {
                            v = std::numeric_limits<double>::quiet_NaN();
                        }
                        woe[k * cfg.replicates + rep] = v;
                    }
                },
                cfg.threads);

            // Ordered sequential reduction.
            for (std::size_t k = 0; k < m; ++k) {
                SimCell cell;
                cell.method = methods[k];
                cell.n = n;
                cell.omega = omega;
                double sum = 0.0;
                long good = 0;
                for (int rep = 0; rep < cfg.replicates; ++rep) {
                    const double v = woe[k * cfg.replicates + rep];
                    if (std::isnan(v)) {
                        ++cell.errors;
                    } else {
                        sum += v;
                        ++good;
                    }
                }
                cell.replicates = good;
                cell.mean_woe = good > 0 ? sum / good : 0.0;
                double ss = 0.0;
                for (int rep = 0; rep < cfg.replicates; ++rep) {
                    const double v = woe[k * cfg.replicates + rep];
                    if (!std::isnan(v)) ss += (v - cell.mean_woe) * (v - cell.mean_woe);
                }
                cell.se = good > 1 ? std::sqrt(ss / (good - 1)) / std::sqrt(double(good)) : 0.0;
                report.cells.push_back(cell);
            }
            if (want_scatter) {
                std::size_t ki = 0, km = 0;
                for (std::size_t k = 0; k < m; ++k) {
                    if (methods[k] == SimMethod::Ideal) ki = k;
                    if (methods[k] == SimMethod::BffMax) km = k;
                }
                for (int rep = 0; rep < cfg.replicates; ++rep) {
                    const double vi = woe[ki * cfg.replicates + rep];
                    const double vm = woe[km * cfg.replicates + rep];
                    if (!std::isnan(vi) && !std::isnan(vm))
                        report.scatter.push_back({n, omega, vi, vm});
                }
            }
        }
    }
    return report;
}

} // namespace bff
