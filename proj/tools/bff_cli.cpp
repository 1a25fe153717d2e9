// Command-line interface for Bayes factor functions: per-statistic curves,
// nu selection, meta-analytic combination, operating-characteristics
// simulation, D_EP prior comparison and single Bayes factors.
//
// Exit codes: 0 success, 1 usage or domain error, 2 numerical failure.

#include "bff/bff.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace bff;

constexpr double kLn10 = 2.302585092994046;

std::string fmt(double v) { return io::fmt(v); }

double display(double woe, bool log10) { return log10 ? woe / kLn10 : woe; }

struct FamilyArgs {
    std::string family = "z";
    double stat = 0.0;
    double n = 0.0, n1 = 0.0, n2 = 0.0;
    int df1 = 1, df2 = 0;
    std::string sided = "two";
    std::string row = "auto";
};

void add_family_options(CLI::App* cmd, FamilyArgs& a, bool need_stat = true) {
    cmd->add_option("--family", a.family, "statistic family: z, t, chisq, f")
        ->check(CLI::IsMember({"z", "t", "chisq", "f"}));
    if (need_stat) cmd->add_option("--stat", a.stat, "observed statistic value")->required();
    cmd->add_option("--n", a.n, "sample size (one-sample rows)");
    cmd->add_option("--n1", a.n1, "first group sample size");
    cmd->add_option("--n2", a.n2, "second group sample size");
    cmd->add_option("--df1", a.df1, "numerator df (chisq, f)");
    cmd->add_option("--df2", a.df2, "denominator df (t, f); default n-1");
    cmd->add_option("--sided", a.sided, "two, greater or less (z/t only)")
        ->check(CLI::IsMember({"two", "greater", "less"}));
    cmd->add_option("--row", a.row,
                    "calibration row: auto, z, t, two-sample-z, two-sample-t, chisq, "
                    "linear-model, likelihood-ratio")
        ->check(CLI::IsMember({"auto", "z", "t", "two-sample-z", "two-sample-t", "chisq",
                               "linear-model", "likelihood-ratio"}));
}

Sidedness parse_sided(const std::string& s) {
    if (s == "greater") return Sidedness::Greater;
    if (s == "less") return Sidedness::Less;
    return Sidedness::TwoSided;
}

TestStatistic build_statistic(const FamilyArgs& a) {
    const bool two_sample = a.n1 > 0.0 || a.n2 > 0.0;
    SampleSpec sample = two_sample ? SampleSpec::two(a.n1, a.n2) : SampleSpec::one(a.n);

    StatFamily fam;
    int df2 = a.df2;
    if (df2 == 0 && (a.family == "t" || a.family == "f"))
        df2 = static_cast<int>(sample.total()) - (two_sample ? 2 : 1);
    if (a.family == "z") fam = StatFamily::z();
    else if (a.family == "t") fam = StatFamily::t(df2);
    else if (a.family == "chisq") fam = StatFamily::chisq(a.df1);
    else fam = StatFamily::f(a.df1, df2);

    TestRow row;
    if (a.row == "z") row = TestRow::OneSampleZ;
    else if (a.row == "t") row = TestRow::OneSampleT;
    else if (a.row == "two-sample-z") row = TestRow::TwoSampleZ;
    else if (a.row == "two-sample-t") row = TestRow::TwoSampleT;
    else if (a.row == "chisq") row = TestRow::MultinomialPoisson;
    else if (a.row == "linear-model") row = TestRow::LinearModel;
    else if (a.row == "likelihood-ratio") row = TestRow::LikelihoodRatio;
    else {
        // auto: z/t rows for z/t statistics and for df1 = 1 chisq/F (the
        // squared-statistic equivalence); vector rows otherwise.
        switch (fam.kind) {
            case Family::Z: row = two_sample ? TestRow::TwoSampleZ : TestRow::OneSampleZ; break;
            case Family::T: row = two_sample ? TestRow::TwoSampleT : TestRow::OneSampleT; break;
            case Family::ChiSq:
                row = fam.df1 == 1 ? (two_sample ? TestRow::TwoSampleZ : TestRow::OneSampleZ)
                                   : TestRow::MultinomialPoisson;
                break;
            case Family::F:
                row = fam.df1 == 1 ? (two_sample ? TestRow::TwoSampleT : TestRow::OneSampleT)
                                   : TestRow::LinearModel;
                break;
        }
    }
    return TestStatistic::make(fam, a.stat, sample, row, parse_sided(a.sided));
}

GridSpec parse_grid(const std::string& spec) {
    GridSpec g;
    if (spec.empty()) return g;
    double lo, hi, step;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
        throw CLI::ValidationError("--grid expects lo:hi:step");
    g.lo = lo;
    g.hi = hi;
    g.step = step;
    return g;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << text;
}

std::string curve_text(const BFFCurve& c, const std::string& format) {
    std::ostringstream os;
    if (format == "json")
        os << io::curve_to_json(c).dump(2) << '\n';
    else
        io::write_curve_csv(c, os);
    return os.str();
}

int cmd_bff(const FamilyArgs& fa, double nu, const std::string& grid_spec,
            const std::string& out, const std::string& format, bool log10) {
    TestStatistic stat = build_statistic(fa);
    const GridSpec grid = parse_grid(grid_spec);
    const BFFCurve curve = build_bff(stat, nu, grid);
    const std::string text = curve_text(curve, format);
    if (!out.empty())
        write_text(out, text);
    else
        std::cout << text;
    const WOE max_woe{curve.constrained_max.log_bf10};
    std::cout << "omega_min=" << fmt(curve.omega_min)
              << " max_omega=" << fmt(curve.constrained_max.omega)
              << " max_woe=" << fmt(display(max_woe.log_bf10, log10))
              << " band=\"" << describe(categorize(max_woe)) << "\""
              << " n_eff=" << fmt(curve.n_eff) << '\n';
    return 0;
}

int cmd_nu(double gamma, double small, double large, double medium) {
    const double root = select_nu(gamma, small, large, medium);
    const int integer = select_nu_integer(gamma, small, large, medium);
    std::cout << "nu_root=" << fmt(root) << " nu_integer=" << integer
              << " gamma_at_root=" << fmt(nu_criterion_mass(root, small, large, medium))
              << " gamma_at_integer=" << fmt(nu_criterion_mass(integer, small, large, medium))
              << '\n';
    return 0;
}

int cmd_meta(const std::string& input, const std::string& fixture, double nu,
             const std::string& grid_spec, const std::string& out, const std::string& format,
             bool log10) {
    std::vector<StudyRecord> studies;
    if (!fixture.empty()) {
        if (fixture != "manylabs3-persistence")
            throw CLI::ValidationError("unknown fixture '" + fixture + "'");
        studies = manylabs3_persistence();
    } else if (!input.empty()) {
        studies = ingest_studies_file(input);
    } else {
        throw CLI::ValidationError("meta needs --input or --fixture");
    }
    const GridSpec grid = parse_grid(grid_spec);
    const CombinedBFF combined = combined_bff(studies, nu, grid);

    std::ostringstream data;
    if (format == "json") {
        io::json j;
        j["total_n"] = combined.total_n;
        j["omega_min_combined"] = combined.omega_min_combined;
        j["combined"] = io::curve_to_json(combined.combined);
        io::json per = io::json::array();
        for (const auto& c : combined.per_study) per.push_back(io::curve_to_json(c));
        j["per_study"] = per;
        data << j.dump(2) << '\n';
    } else {
        data << "study,omega,log_bf10\n";
        for (std::size_t s = 0; s < combined.per_study.size(); ++s)
            for (const auto& p : combined.per_study[s].points)
                data << (s + 1) << ',' << fmt(p.omega) << ',' << fmt(p.log_bf10) << '\n';
        for (const auto& p : combined.combined.points)
            data << 0 << ',' << fmt(p.omega) << ',' << fmt(p.log_bf10) << '\n';
    }
    if (!out.empty())
        write_text(out, data.str());
    else
        std::cout << data.str();

    const auto& cm = combined.combined.constrained_max;
    std::cout << "total_n=" << fmt(combined.total_n)
              << " omega_min_combined=" << fmt(combined.omega_min_combined)
              << " max_omega=" << fmt(cm.omega)
              << " max_woe=" << fmt(display(cm.log_bf10, log10))
              << " band=\"" << describe(categorize(WOE{cm.log_bf10})) << "\"" << '\n';
    for (std::size_t s = 0; s < combined.per_study.size(); ++s) {
        const auto& c = combined.per_study[s];
        std::cout << "study=" << (s + 1) << " n=" << fmt(c.sample.n1)
                  << " z=" << fmt(c.statistic) << " omega_min=" << fmt(c.omega_min)
                  << " max_omega=" << fmt(c.constrained_max.omega)
                  << " max_woe=" << fmt(display(c.constrained_max.log_bf10, log10)) << '\n';
    }
    return 0;
}

std::vector<SimMethod> parse_methods(const std::string& csv) {
    std::vector<SimMethod> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "ideal") out.push_back(SimMethod::Ideal);
        else if (item == "bff_curve") out.push_back(SimMethod::BffCurve);
        else if (item == "bff_max") out.push_back(SimMethod::BffMax);
        else if (item == "gprior_unit") out.push_back(SimMethod::GpriorUnit);
        else if (item == "gprior_risk") out.push_back(SimMethod::GpriorRisk);
        else if (item == "jzs_r1") out.push_back(SimMethod::JzsR1);
        else if (item == "jzs_r07") out.push_back(SimMethod::JzsR07);
        else throw CLI::ValidationError("unknown method '" + item + "'");
    }
    return out;
}

template <class T>
std::vector<T> parse_list(const std::string& csv) {
    std::vector<T> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(static_cast<T>(std::stod(item)));
    return out;
}

int cmd_sim(const std::string& family, const std::string& n_list, const std::string& omega_list,
            int reps, std::uint64_t seed, const std::string& methods, double nu, bool null_data,
            unsigned threads, const std::string& out, const std::string& scatter_out,
            const std::string& format) {
    SimConfig cfg;
    if (family == "z") cfg.family = Family::Z;
    else if (family == "t") cfg.family = Family::T;
    else if (family == "chisq") cfg.family = Family::ChiSq;
    else cfg.family = Family::F;
    cfg.n_values = parse_list<int>(n_list);
    cfg.omega_grid = parse_list<double>(omega_list);
    cfg.replicates = reps;
    cfg.seed = seed;
    if (!methods.empty()) cfg.methods = parse_methods(methods);
    cfg.nu = nu;
    cfg.null_data = null_data;
    cfg.threads = threads;
    cfg.keep_scatter = !scatter_out.empty();

    const SimReport report = run_sim(cfg);

    std::ostringstream data;
    if (format == "json")
        data << io::report_to_json(report).dump(2) << '\n';
    else
        io::write_report_csv(report, data);
    if (!out.empty())
        write_text(out, data.str());
    else
        std::cout << data.str();
    if (!scatter_out.empty()) {
        std::ostringstream sc;
        io::write_scatter_csv(report, sc);
        write_text(scatter_out, sc.str());
    }
    return 0;
}

PriorSpec parse_prior_proto(const std::string& kind, double nu, Support support) {
    if (kind == "im") return PriorSpec::inverse_moment(1.0, nu, support);
    if (kind == "ig") return PriorSpec::inverse_gamma(0.5 * nu, 1.0);
    if (kind == "normal") return PriorSpec::normal_g(1.0, support);
    if (kind == "jzs") return PriorSpec::cauchy_jzs(1.0, support);
    throw CLI::ValidationError("unknown prior '" + kind + "' (im, ig, normal, jzs)");
}

int cmd_dep(const std::string& family, const std::string& prior_a, const std::string& prior_b,
            const std::string& iqr_list, const std::string& median_list, double nu, double n,
            int df1, int df2, const std::string& out) {
    StatFamily fam;
    if (family == "z") fam = StatFamily::z();
    else if (family == "t") fam = StatFamily::t(df2 > 0 ? df2 : static_cast<int>(n) - 1);
    else if (family == "chisq") fam = StatFamily::chisq(df1);
    else fam = StatFamily::f(df1, df2 > 0 ? df2 : static_cast<int>(n) - 1);

    const bool use_median = !median_list.empty();
    if (use_median && !iqr_list.empty())
        throw CLI::ValidationError("pass either --iqr or --median, not both");
    if (!use_median && iqr_list.empty())
        throw CLI::ValidationError("dep needs --iqr or --median index values");
    const Support support = use_median || fam.nonnegative_support() ? Support::PositiveOnly
                                                                    : Support::TwoSided;
    const PriorSpec pa = parse_prior_proto(prior_a, nu, support);
    const PriorSpec pb = parse_prior_proto(prior_b, nu, support);

    std::vector<io::DepRow> rows;
    for (double index : parse_list<double>(use_median ? median_list : iqr_list)) {
        const DepComparison c = dep_compare(fam, pa, pb, index);
        rows.push_back({index, c.dep_a, c.dep_b});
    }
    std::ostringstream data;
    io::write_dep_csv(rows, data);
    if (!out.empty())
        write_text(out, data.str());
    else
        std::cout << data.str();
    return 0;
}

int cmd_bf(const FamilyArgs& fa, const std::string& prior, double tau, double nu, double g,
           double r, double omega, bool log10) {
    TestStatistic stat = build_statistic(fa);
    WOE woe{};
    if (prior == "gprior") {
        woe = log_bf10_gprior(stat, g);
    } else if (prior == "jzs") {
        woe = log_bf10_jzs(stat, r);
    } else if (prior == "im" || prior == "ig") {
        PriorSpec p = stat.family.nonnegative_support()
                          ? PriorSpec::inverse_gamma(0.5 * nu, tau)
                          : PriorSpec::inverse_moment(tau, nu,
                                                      detail::support_for(stat.sidedness));
        woe = log_bf10(stat, p);
    } else if (prior == "effect") {
        woe = log_bf10_at_effect(stat, omega, nu);
    } else {
        throw CLI::ValidationError("unknown prior '" + prior + "' (im, ig, gprior, jzs, effect)");
    }
    std::cout << "woe=" << fmt(display(woe.log_bf10, log10)) << " bf10=" << fmt(std::exp(woe.log_bf10))
              << " band=\"" << describe(categorize(woe)) << "\""
              << " posterior_null=" << fmt(posterior_null_probability(woe)) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayes factor functions from z, t, chi-squared and F statistics"};
    app.require_subcommand(1);

    // bff
    auto* c_bff = app.add_subcommand("bff", "BFF curve for one statistic");
    FamilyArgs bff_args;
    add_family_options(c_bff, bff_args);
    double bff_nu = 9.0;
    std::string bff_grid, bff_out, bff_format = "csv";
    bool bff_log10 = false;
    c_bff->add_option("--nu", bff_nu, "prior shape nu (default 9)");
    c_bff->add_option("--grid", bff_grid, "omega grid lo:hi:step (default 0.01:1.0:0.005)");
    c_bff->add_option("--out", bff_out, "curve output path (default stdout)");
    c_bff->add_option("--format", bff_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c_bff->add_flag("--log10", bff_log10, "display WOE in base-10 logs");

    // nu
    auto* c_nu = app.add_subcommand("nu", "solve the nu-selection criterion");
    double nu_gamma = 0.9, nu_small = 0.2, nu_large = 0.8, nu_medium = 0.5;
    c_nu->add_option("--gamma", nu_gamma, "target prior mass on (small, large) effects");
    c_nu->add_option("--small", nu_small, "small standardized effect");
    c_nu->add_option("--large", nu_large, "large standardized effect");
    c_nu->add_option("--medium", nu_medium, "medium standardized effect (prior mode)");

    // meta
    auto* c_meta = app.add_subcommand("meta", "combine replicated studies");
    std::string meta_input, meta_fixture, meta_grid, meta_out, meta_format = "csv";
    double meta_nu = 9.0;
    bool meta_log10 = false;
    c_meta->add_option("--input", meta_input, "CSV of r,n study records");
    c_meta->add_option("--fixture", meta_fixture, "embedded dataset: manylabs3-persistence");
    c_meta->add_option("--nu", meta_nu, "prior shape nu (default 9)");
    c_meta->add_option("--grid", meta_grid, "omega grid lo:hi:step");
    c_meta->add_option("--out", meta_out, "output path (default stdout)");
    c_meta->add_option("--format", meta_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c_meta->add_flag("--log10", meta_log10, "display WOE in base-10 logs");

    // sim
    auto* c_sim = app.add_subcommand("sim", "operating-characteristics simulation");
    std::string sim_family = "f", sim_n = "50,100,150,200", sim_omega = "0";
    std::string sim_methods, sim_out, sim_scatter, sim_format = "csv";
    int sim_reps = 10000;
    std::uint64_t sim_seed = 1;
    double sim_nu = 9.0;
    bool sim_null = false;
    unsigned sim_threads = 0;
    c_sim->add_option("--family", sim_family, "f, chisq, z or t")
        ->check(CLI::IsMember({"f", "chisq", "z", "t"}));
    c_sim->add_option("--n", sim_n, "comma-separated sample sizes");
    c_sim->add_option("--omega", sim_omega, "comma-separated effect sizes (0 = null)");
    c_sim->add_option("--reps", sim_reps, "replicates per cell (default 10000)");
    c_sim->add_option("--seed", sim_seed, "RNG seed");
    c_sim->add_option("--methods", sim_methods,
                      "comma list: ideal,bff_curve,bff_max,gprior_unit,gprior_risk,jzs_r1,jzs_r07");
    c_sim->add_option("--nu", sim_nu, "prior shape nu (default 9)");
    c_sim->add_flag("--null-data", sim_null, "draw central data; omega indexes the centering");
    c_sim->add_option("--threads", sim_threads, "worker threads (default BFF_THREADS or cores)");
    c_sim->add_option("--out", sim_out, "report output path (default stdout)");
    c_sim->add_option("--scatter-out", sim_scatter, "per-replicate (ideal, bff_max) scatter CSV");
    c_sim->add_option("--format", sim_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // dep
    auto* c_dep = app.add_subcommand("dep", "expected-posterior-probability comparison");
    std::string dep_family = "z", dep_a = "im", dep_b = "jzs", dep_iqr, dep_median, dep_out;
    double dep_nu = 9.0, dep_n = 100.0;
    int dep_df1 = 1, dep_df2 = 0;
    c_dep->add_option("--family", dep_family, "z, t, chisq or f")
        ->check(CLI::IsMember({"z", "t", "chisq", "f"}));
    c_dep->add_option("--prior-a", dep_a, "im, ig, normal or jzs");
    c_dep->add_option("--prior-b", dep_b, "im, ig, normal or jzs");
    c_dep->add_option("--iqr", dep_iqr, "comma list of IQR index values (two-sided)");
    c_dep->add_option("--median", dep_median, "comma list of median index values (one-sided)");
    c_dep->add_option("--nu", dep_nu, "inverse-moment/inverse-gamma shape nu");
    c_dep->add_option("--n", dep_n, "sample size (sets t/f denominator df)");
    c_dep->add_option("--df1", dep_df1, "chisq/f numerator df");
    c_dep->add_option("--df2", dep_df2, "t/f denominator df override");
    c_dep->add_option("--out", dep_out, "output path (default stdout)");

    // bf
    auto* c_bf = app.add_subcommand("bf", "single Bayes factor for one statistic");
    FamilyArgs bf_args;
    add_family_options(c_bf, bf_args);
    std::string bf_prior = "im";
    double bf_tau = 1.0, bf_nu = 9.0, bf_g = 1.0, bf_r = 1.0, bf_omega = 0.5;
    bool bf_log10 = false;
    c_bf->add_option("--prior", bf_prior, "im, ig, gprior, jzs or effect");
    c_bf->add_option("--tau", bf_tau, "im/ig dispersion tau");
    c_bf->add_option("--nu", bf_nu, "im/ig shape nu");
    c_bf->add_option("--g", bf_g, "g-prior variance");
    c_bf->add_option("--r", bf_r, "Cauchy scale");
    c_bf->add_option("--omega", bf_omega, "standardized effect (prior=effect)");
    c_bf->add_flag("--log10", bf_log10, "display WOE in base-10 logs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_bff) return cmd_bff(bff_args, bff_nu, bff_grid, bff_out, bff_format, bff_log10);
        if (*c_nu) return cmd_nu(nu_gamma, nu_small, nu_large, nu_medium);
        if (*c_meta)
            return cmd_meta(meta_input, meta_fixture, meta_nu, meta_grid, meta_out, meta_format,
                            meta_log10);
        if (*c_sim)
            return cmd_sim(sim_family, sim_n, sim_omega, sim_reps, sim_seed, sim_methods, sim_nu,
                           sim_null, sim_threads, sim_out, sim_scatter, sim_format);
        if (*c_dep)
            return cmd_dep(dep_family, dep_a, dep_b, dep_iqr, dep_median, dep_nu, dep_n, dep_df1,
                           dep_df2, dep_out);
        if (*c_bf) return cmd_bf(bf_args, bf_prior, bf_tau, bf_nu, bf_g, bf_r, bf_omega, bf_log10);
    } catch (const bff::NumericError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
