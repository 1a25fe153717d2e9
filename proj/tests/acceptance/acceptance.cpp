// Acceptance suite: one check per numbered criterion, each printing a single
// PASS/FAIL line. Usage: bff_acceptance <1-8|all> [path-to-cli].
//
// Criteria 2 and 6 contain sub-checks that are not attainable from the
// published formulas and data (see the repository notes); they are asserted
// exactly as stated and report the measured values when they fail.

#include "bff/bff.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace bff;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail += (detail.empty() ? "" : "; ") + std::string(ok ? "ok: " : "FAILED: ") + what;
    }
};

std::string g_cli_path;

std::string run_cli(const std::string& args, int& exit_code) {
    const std::string cmd = g_cli_path + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        exit_code = -1;
        return {};
    }
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    exit_code = pclose(pipe);
    return out;
}

// Parses "key=value" tokens out of CLI summary lines.
double parse_kv(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + "=");
    if (pos == std::string::npos) return std::numeric_limits<double>::quiet_NaN();
    return std::strtod(text.c_str() + pos + key.size() + 1, nullptr);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

TestStatistic z_stat(double z, double n) {
    return TestStatistic::make(StatFamily::z(), z, SampleSpec::one(n), TestRow::OneSampleZ);
}

// --- criterion 1: worked z example through the CLI ---
Outcome criterion_1() {
    Outcome o;
    int rc = 0;
    const std::string out =
        run_cli("bff --family z --stat 1.0 --n 100 --nu 9 --out /tmp/bff_accept_c1.csv", rc);
    o.check(rc == 0, "CLI exit code 0");
    const double w_min = parse_kv(out, "omega_min");
    const double max_woe = parse_kv(out, "max_woe");
    o.check(std::abs(w_min - 0.2449) <= 0.0005, "omega_min=" + fmt(w_min) + " within 0.2449+-0.0005");
    o.check(std::abs(max_woe - (-1.46)) <= 0.05, "max WOE=" + fmt(max_woe) + " within -1.46+-0.05");
    o.check(out.find("evidence for null") != std::string::npos, "band reported for the null");
    return o;
}

// --- criterion 2: nu selection ---
Outcome criterion_2() {
    Outcome o;
    const double root = select_nu(0.9);
    const int rounded = select_nu_integer(0.9);
    o.check(rounded == 9, "selected integer nu = " + std::to_string(rounded) + " equals 9");
    o.check(std::abs(nu_criterion_mass(root) - 0.9) < 1e-5,
            "criterion mass at the continuous root " + fmt(root) + " equals 0.9");
    int rc = 0;
    const std::string out = run_cli("nu --gamma 0.9", rc);
    o.check(rc == 0 && parse_kv(out, "nu_integer") == 9.0, "CLI nu --gamma 0.9 reports integer 9");
    // As stated: the integral at nu = 9 should be 0.90 +- 0.01. The exact
    // value of the published criterion at nu = 9 is 0.9175 (the continuous
    // root of 0.9 is 8.09; 9 is the smallest integer satisfying the
    // constraint), so this literal sub-check cannot pass; see notes.
    const double mass9 = nu_criterion_mass(9.0);
    o.check(std::abs(mass9 - 0.90) <= 0.01,
            "integral at nu=9 is " + fmt(mass9) + ", spec asserts 0.90+-0.01");
    return o;
}

// --- criterion 3: equivalence suite ---
Outcome criterion_3() {
    Outcome o;
    RngStream rng = RngStream::keyed(424242);
    double worst_z = 0.0, worst_t = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double z = -4.0 + 8.0 * rng.uniform01();
        const double n = 20.0 + 380.0 * rng.uniform01();
        const double omega = 0.05 + 0.9 * rng.uniform01();
        const double nu = 1.0 + 15.0 * rng.uniform01();
        const double tau = n * omega * omega * (nu + 1.0) / 2.0;
        const double woe_z = log_bf10(z_stat(z, n), PriorSpec::inverse_moment(tau, nu)).log_bf10;
        const auto chisq = TestStatistic::make(StatFamily::chisq(1), z * z, SampleSpec::one(n),
                                               TestRow::OneSampleZ);
        const double woe_c = log_bf10(chisq, PriorSpec::inverse_gamma(0.5 * nu, tau)).log_bf10;
        worst_z = std::max(worst_z, std::abs(woe_z - woe_c));

        const int df = 10 + static_cast<int>(190.0 * rng.uniform01());
        const double t = z;
        const auto ts = TestStatistic::make(StatFamily::t(df), t, SampleSpec::one(df + 1.0),
                                            TestRow::OneSampleT);
        const auto fs = TestStatistic::make(StatFamily::f(1, df), t * t,
                                            SampleSpec::one(df + 1.0), TestRow::OneSampleT);
        const double woe_t = log_bf10(ts, PriorSpec::inverse_moment(tau, nu)).log_bf10;
        const double woe_f = log_bf10(fs, PriorSpec::inverse_gamma(0.5 * nu, tau)).log_bf10;
        worst_t = std::max(worst_t, std::abs(woe_t - woe_f));
    }
    o.check(worst_z < 1e-6, "max |z vs chisq1| deviation " + fmt(worst_z * 1e6) + "e-6 < 1e-6");
    o.check(worst_t < 1e-6, "max |t vs F1| deviation " + fmt(worst_t * 1e6) + "e-6 < 1e-6");
    return o;
}

std::map<std::pair<std::string, int>, SimCell> run_table_sim(std::vector<SimMethod> methods) {
    SimConfig cfg;
    cfg.family = Family::F;
    cfg.n_values = {50, 100, 150, 200};
    cfg.omega_grid = {0.0};
    cfg.replicates = 10000;
    cfg.methods = std::move(methods);
    cfg.seed = 20240801;
    cfg.keep_scatter = false;
    const SimReport r = run_sim(cfg);
    std::map<std::pair<std::string, int>, SimCell> out;
    for (const auto& c : r.cells) out[{sim_method_name(c.method), c.n}] = c;
    return out;
}

// --- criterion 4: unit-information and risk-inflation g-priors ---
Outcome criterion_4() {
    Outcome o;
    const auto cells = run_table_sim({SimMethod::GpriorUnit, SimMethod::GpriorRisk});
    const std::map<int, double> unit = {{50, -1.46}, {100, -1.80}, {150, -2.01}, {200, -2.15}};
    const std::map<int, double> risk = {{50, -0.092}, {100, -0.094}, {150, -0.095}, {200, -0.095}};
    for (const auto& [n, target] : unit) {
        const double m = cells.at({"gprior_unit", n}).mean_woe;
        o.check(std::abs(m - target) <= 0.05,
                "g=n, n=" + std::to_string(n) + ": " + fmt(m) + " vs " + fmt(target) + "+-0.05");
    }
    for (const auto& [n, target] : risk) {
        const double m = cells.at({"gprior_risk", n}).mean_woe;
        o.check(std::abs(m - target) <= 0.01,
                "g=1, n=" + std::to_string(n) + ": " + fmt(m) + " vs " + fmt(target) + "+-0.01");
    }
    return o;
}

// --- criterion 5: JZS priors ---
Outcome criterion_5() {
    Outcome o;
    const auto cells = run_table_sim({SimMethod::JzsR07, SimMethod::JzsR1});
    const std::map<int, double> r07 = {{50, -0.24}, {100, -0.24}, {150, -0.25}, {200, -0.25}};
    const std::map<int, double> r1 = {{50, -0.35}, {100, -0.36}, {150, -0.36}, {200, -0.36}};
    for (const auto& [n, target] : r07) {
        const double m = cells.at({"jzs_r07", n}).mean_woe;
        o.check(std::abs(m - target) <= 0.03,
                "r=0.7, n=" + std::to_string(n) + ": " + fmt(m) + " vs " + fmt(target) + "+-0.03");
    }
    for (const auto& [n, target] : r1) {
        const double m = cells.at({"jzs_r1", n}).mean_woe;
        o.check(std::abs(m - target) <= 0.03,
                "r=1, n=" + std::to_string(n) + ": " + fmt(m) + " vs " + fmt(target) + "+-0.03");
    }
    return o;
}

// --- criterion 6: replicated-study example ---
Outcome criterion_6() {
    Outcome o;
    const auto& studies = manylabs3_persistence();
    const CombinedBFF cb = combined_bff(studies, 9.0);
    double total_n = 0.0;
    for (const auto& s : studies) total_n += s.n;
    const double expect_omega = std::sqrt(6.0 / total_n);
    const auto& cm = cb.combined.constrained_max;
    o.check(std::abs(cm.omega - expect_omega) <= 0.002,
            "combined max at omega=" + fmt(cm.omega) + " within sqrt(6/sum n)=" +
                fmt(expect_omega) + "+-0.002");
    o.check(std::abs(cb.per_study.front().omega_min - 0.267) <= 0.005,
            "first-site omega_min=" + fmt(cb.per_study.front().omega_min) + " within 0.267+-0.005");
    // As stated: combined constrained-max WOE of -4.75 +- 0.10. Evaluating
    // the product of the twenty published (r, n) Bayes factors at the
    // combined threshold gives about -0.68 under every calibration the
    // published equations admit; the -4.75 cannot be reproduced. See notes.
    o.check(std::abs(cm.log_bf10 - (-4.75)) <= 0.10,
            "combined max WOE is " + fmt(cm.log_bf10) + ", spec asserts -4.75+-0.10");
    return o;
}

// --- criterion 7: property suite ---
Outcome criterion_7() {
    Outcome o;
    {
        // Prior normalization via quadrature.
        const PriorSpec priors[] = {
            PriorSpec::inverse_moment(125.0, 9.0),
            PriorSpec::inverse_gamma(4.5, 137.5),
            PriorSpec::normal_g(100.0),
            PriorSpec::cauchy_jzs(5.0),
        };
        double worst = 0.0;
        for (const auto& p : priors) {
            auto f = [&](double x) { return prior_density(p, x); };
            quad::Options opt;
            opt.rel_tol = 1e-10;
            double total;
            if (std::holds_alternative<InverseGammaPrior>(p.dist)) {
                const double m = prior_quantile(p, 0.5);
                total = quad::integrate_with_tails(f, {1e-12, 0.5 * m, m, 4.0 * m}, true, opt)
                            .value;
            } else {
                std::vector<double> pts{0.0};
                for (double q : {0.05, 0.25, 0.75, 0.95}) pts.push_back(prior_quantile(p, q));
                std::sort(pts.begin(), pts.end());
                total = quad::integrate_with_tails(f, pts, false, opt).value;
            }
            worst = std::max(worst, std::abs(total - 1.0));
        }
        o.check(worst < 1e-8, "prior normalization within 1e-8 (worst " + fmt(worst * 1e9) + "e-9)");
    }
    {
        // Mode placement for every calibration row.
        bool all_ok = true;
        const std::pair<TestRow, SampleSpec> rows[] = {
            {TestRow::OneSampleZ, SampleSpec::one(100)},
            {TestRow::OneSampleT, SampleSpec::one(60)},
            {TestRow::TwoSampleZ, SampleSpec::two(40, 70)},
            {TestRow::TwoSampleT, SampleSpec::two(25, 25)},
            {TestRow::MultinomialPoisson, SampleSpec::one(80)},
            {TestRow::LinearModel, SampleSpec::one(120)},
            {TestRow::LikelihoodRatio, SampleSpec::one(100)},
        };
        for (const auto& [row, sizes] : rows) {
            for (double omega : {0.09, 0.36}) {
                for (double nu : {4.0, 9.0}) {
                    const double tau = tau_for_effect({row, sizes, omega, nu});
                    const PriorSpec prior = prior_for_row(row, tau, nu);
                    double target;
                    if (is_two_sample(row))
                        target = std::sqrt(2.0 * sizes.n1 * sizes.n2 / sizes.total()) * omega;
                    else if (is_vector_effect_row(row))
                        target = sizes.n1 * omega;
                    else
                        target = std::sqrt(sizes.n1) * omega;
                    const auto [w, v] = roots::golden_max(
                        [&](double lam) { return prior_log_density(prior, lam); },
                        0.25 * target, 4.0 * target, 1e-9);
                    (void)v;
                    if (std::abs(w / target - 1.0) > 1e-6) all_ok = false;
                }
            }
        }
        o.check(all_ok, "prior modes sit on the tabulated non-centralities (1e-6 relative)");
    }
    {
        // Inverse-moment / inverse-gamma cdf correspondence.
        double worst = 0.0;
        const PriorSpec im = PriorSpec::inverse_moment(80.0, 6.0);
        const PriorSpec ig = PriorSpec::inverse_gamma(3.0, 80.0);
        for (double y : {0.5, 2.0, 10.0, 40.0, 200.0}) {
            const double w = std::sqrt(y);
            worst = std::max(worst, std::abs(prior_cdf(im, w) - prior_cdf(im, -w) -
                                             prior_cdf(ig, y)));
        }
        o.check(worst < 1e-10, "IM/IG cdf correspondence within 1e-10");
    }
    {
        // D_EP identity and fixed point.
        const auto f = MarginalModel::null_model(StatFamily::z());
        const auto g = MarginalModel::alternative(StatFamily::z(),
                                                  PriorSpec::inverse_moment(125.0, 9.0));
        const double fg = dep({f, g});
        const double gf = dep({g, f});
        o.check(std::abs(fg - gf) < 1e-6,
                "D_EP symmetry |" + fmt(fg) + " - " + fmt(gf) + "| < 1e-6");
        o.check(std::abs(dep({f, f}) - 0.5) < 1e-9, "D_EP(f||f) = 0.5");
    }
    {
        // Product decomposition on three studies.
        const std::vector<StudyRecord> studies = {{-0.15, 40}, {0.08, 90}, {0.2, 150}};
        const double omega = 0.12, nu = 9.0;
        double brute = 0.0;
        for (const auto& s : studies) {
            const double z = fisher_z(s);
            const PriorSpec prior = PriorSpec::inverse_moment(meta_tau(s, omega, nu), nu);
            const long n = 400000;
            const double lo = -40.0, hi = 40.0, h = (hi - lo) / n;
            double m = 0.0;
            for (long i = 0; i <= n; ++i) {
                const double lam = lo + i * h;
                const double w = (i == 0 || i == n) ? 0.5 : 1.0;
                m += w * std::exp(-0.5 * (z - lam) * (z - lam)) /
                     std::sqrt(2.0 * std::numbers::pi) * prior_density(prior, lam);
            }
            brute += std::log(m * h) + 0.5 * std::log(2.0 * std::numbers::pi) + 0.5 * z * z;
        }
        const CombinedBFF cb = combined_bff(studies, nu, {omega, 2.0 * omega, omega});
        o.check(std::abs(cb.combined.points.front().log_bf10 - brute) < 1e-8,
                "product decomposition within 1e-8 of the brute-force joint");
    }
    {
        const double w0 = log_bf10_at_effect(z_stat(1.0, 100.0), 0.001, 9.0).log_bf10;
        o.check(std::abs(w0) < 0.01, "BFF at omega=0.001 is " + fmt(w0) + ", inside +-0.01");
    }
    {
        SimConfig cfg;
        cfg.n_values = {50};
        cfg.omega_grid = {0.0, 0.4};
        cfg.replicates = 200;
        cfg.methods = {SimMethod::Ideal, SimMethod::GpriorUnit, SimMethod::JzsR07};
        cfg.seed = 3141;
        cfg.threads = 1;
        const SimReport a = run_sim(cfg);
        cfg.threads = 3;
        const SimReport b = run_sim(cfg);
        bool identical = a.cells.size() == b.cells.size();
        for (std::size_t i = 0; identical && i < a.cells.size(); ++i)
            identical = a.cells[i].mean_woe == b.cells[i].mean_woe && a.cells[i].se == b.cells[i].se;
        o.check(identical, "simulator is bitwise seed-deterministic across thread counts");
    }
    return o;
}

// --- criterion 8: scatter fidelity of the constrained maximum ---
Outcome criterion_8() {
    Outcome o;
    SimConfig cfg;
    cfg.family = Family::F;
    cfg.n_values = {100};
    cfg.omega_grid = {0.6};
    cfg.replicates = 10000;
    cfg.methods = {SimMethod::Ideal, SimMethod::BffMax};
    cfg.seed = 808;
    const SimReport r = run_sim(cfg);
    o.check(r.scatter.size() == 10000, "10000 scatter pairs retained");
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const double n = static_cast<double>(r.scatter.size());
    for (const auto& s : r.scatter) {
        sx += s.ideal;
        sy += s.bff_max;
        sxx += s.ideal * s.ideal;
        syy += s.bff_max * s.bff_max;
        sxy += s.ideal * s.bff_max;
    }
    const double corr = (n * sxy - sx * sy) /
                        std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    o.check(corr > 0.9, "Pearson corr(bff_max, ideal) = " + fmt(corr) + " > 0.9");
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "worked z example via CLI", 10.0, criterion_1},
    {2, "nu selection", 1.0, criterion_2},
    {3, "z/chisq and t/F equivalence suite", 120.0, criterion_3},
    {4, "g-prior average WOE table", 300.0, criterion_4},
    {5, "JZS average WOE table", 600.0, criterion_5},
    {6, "replicated-study combination", 60.0, criterion_6},
    {7, "property suite", 300.0, criterion_7},
    {8, "maximum-vs-ideal scatter", 300.0, criterion_8},
};

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: bff_acceptance <1-8|all> [cli-path]\n";
        return 2;
    }
    g_cli_path = argc > 2 ? argv[2] : "./tools/bff";
    const std::string which = argv[1];
    int failures = 0;
    for (const auto& c : kCriteria) {
        if (which != "all" && which != std::to_string(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o = c.run();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_seconds)
            o.check(false, "runtime " + fmt(secs) + "s exceeded budget " +
                               fmt(c.budget_seconds) + "s");
        std::printf("[%s] criterion %d: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    secs);
        std::printf("        %s\n", o.detail.c_str());
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
