#pragma once

// Marginal likelihoods of test statistics under alternative priors, and the
// Bayes factors built from them. All evidence arithmetic is in log space; the
// integrand is shifted by its probed maximum before quadrature so extreme
// statistics cannot overflow or underflow.

#include "bff/calibration.hpp"
#include "bff/dist.hpp"
#include "bff/error.hpp"
#include "bff/math/quadrature.hpp"
#include "bff/priors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace bff {

enum class Sidedness { TwoSided, Greater, Less };

struct TestStatistic {
    StatFamily family;
    double value = 0.0;
    Sidedness sidedness = Sidedness::TwoSided;
    SampleSpec sample;
    TestRow row = TestRow::OneSampleZ;

    static TestStatistic make(StatFamily fam, double value, SampleSpec sample, TestRow row,
                              Sidedness sided = Sidedness::TwoSided) {
        TestStatistic s{fam, value, sided, sample, row};
        s.validate();
        return s;
    }

    void validate() const {
        family.validate();
        if (!std::isfinite(value)) throw std::domain_error("statistic value must be finite");
        if (family.nonnegative_support()) {
            if (value < 0.0) throw std::domain_error("chisq/F statistic must be >= 0");
            if (sidedness != Sidedness::TwoSided)
                throw std::domain_error("chisq/F tests are one-sided in lambda; sidedness fixed");
        }
        switch (family.kind) {
            case Family::Z:
                if (row != TestRow::OneSampleZ && row != TestRow::TwoSampleZ)
                    throw std::domain_error("z statistic requires a z test row");
                break;
            case Family::T:
                if (row != TestRow::OneSampleT && row != TestRow::TwoSampleT)
                    throw std::domain_error("t statistic requires a t test row");
                break;
            case Family::ChiSq: {
                // df1 = 1 may calibrate through the equivalent two-sided z row.
                const bool chisq_row = row == TestRow::MultinomialPoisson ||
                                       row == TestRow::LikelihoodRatio;
                const bool z_equiv = family.df1 == 1 && (row == TestRow::OneSampleZ ||
                                                         row == TestRow::TwoSampleZ);
                if (!chisq_row && !z_equiv)
                    throw std::domain_error("chi-squared statistic requires a chi-squared row "
                                            "(or a z row when df1 = 1)");
                break;
            }
            case Family::F: {
                const bool t_equiv = family.df1 == 1 && (row == TestRow::OneSampleT ||
                                                         row == TestRow::TwoSampleT);
                if (row != TestRow::LinearModel && !t_equiv)
                    throw std::domain_error("F statistic requires the linear model row "
                                            "(or a t row when df1 = 1)");
                break;
            }
        }
        if (is_two_sample(row) != sample.two_sample())
            throw std::domain_error("sample spec does not match one-/two-sample row");
    }
};

// Natural log of BF10; negative values favor the null.
struct WOE {
    double log_bf10 = 0.0;
};

inline double log_null_density(const TestStatistic& stat) {
    return log_density({stat.family, stat.value, 0.0});
}

namespace detail {

inline Support support_for(Sidedness s) {
    switch (s) {
        case Sidedness::TwoSided: return Support::TwoSided;
        case Sidedness::Greater: return Support::PositiveOnly;
        case Sidedness::Less: return Support::NegativeOnly;
    }
    return Support::TwoSided;
}

// Rough location of the lambda that maximizes f(x | lambda); only a split
// hint, accuracy does not matter.
inline double statistic_peak_lambda(const TestStatistic& stat) {
    switch (stat.family.kind) {
        case Family::Z:
        case Family::T: return stat.value;
        case Family::ChiSq: return std::max(0.0, stat.value - stat.family.df1);
        case Family::F: return std::max(0.0, stat.family.df1 * (stat.value - 1.0));
    }
    return 0.0;
}

// Shared shifted-quadrature driver: integrates exp(log_f) over the domain,
// splitting at `points` and mapping tails, and returns the log integral.
template <class LogF>
double log_integral_shifted(const LogF& log_f, std::vector<double> points, bool lower_bounded,
                            const std::string& context) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    // Probe breakpoints and midpoints for the integrand's scale.
    double shift = -std::numeric_limits<double>::infinity();
    auto probe = [&](double x) {
        const double v = log_f(x);
        if (std::isfinite(v) && v > shift) shift = v;
    };
    for (std::size_t i = 0; i < points.size(); ++i) {
        probe(points[i]);
        if (i + 1 < points.size()) probe(0.5 * (points[i] + points[i + 1]));
    }
    probe(points.back() + 1.0);
    if (!lower_bounded) probe(points.front() - 1.0);
    if (!std::isfinite(shift))
        throw NumericError("marginal integrand vanished at every probe in " + context);
    auto f = [&](double x) {
        const double v = log_f(x) - shift;
        return v > -745.0 ? std::exp(v) : 0.0;
    };
    quad::Options opt;
    opt.rel_tol = 1e-9;
    try {
        const auto r = quad::integrate_with_tails(f, points, lower_bounded, opt);
        if (!(r.value > 0.0))
            throw NumericError("marginal integral not positive in " + context);
        return shift + std::log(r.value);
    } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " [" + context + "]");
    }
}

} // namespace detail

// log of the marginal density of the statistic under the alternative,
// integrating the noncentral density against the prior on lambda.
inline double log_marginal_alt(const TestStatistic& stat, const PriorSpec& prior) {
    stat.validate();
    prior.validate();
    const bool lambda_nonneg = stat.family.nonnegative_support();
    if (lambda_nonneg && !prior.positive_only())
        throw std::domain_error("chisq/F non-centrality requires a positive-only prior");

    auto log_f = [&](double lambda) {
        if (lambda_nonneg && lambda < 0.0) return -std::numeric_limits<double>::infinity();
        const double lp = prior_log_density(prior, lambda);
        if (!std::isfinite(lp)) return -std::numeric_limits<double>::infinity();
        return log_density({stat.family, stat.value, lambda}) + lp;
    };

    std::vector<double> points;
    for (double m : prior_modes(prior)) points.push_back(m);
    // Quantiles far into both tails so no prior mass hides between nodes of
    // a wide segment.
    for (double p : {1e-10, 1e-6, 1e-4, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0 - 1e-4,
                     1.0 - 1e-6, 1.0 - 1e-10})
        points.push_back(prior_quantile(prior, p));
    const double peak = detail::statistic_peak_lambda(stat);
    points.push_back(peak);
    if (!lambda_nonneg && stat.family.kind != Family::ChiSq) points.push_back(-peak);
    points.push_back(0.0);

    bool lower_bounded = lambda_nonneg || prior.support == Support::PositiveOnly;
    if (prior.support == Support::NegativeOnly) {
        // Reflect so the bounded end is the lower one.
        auto reflected = [&](double u) { return log_f(-u); };
        std::vector<double> rp;
        for (double x : points) rp.push_back(-x);
        rp.push_back(0.0);
        rp.erase(std::remove_if(rp.begin(), rp.end(), [](double x) { return x < 0.0; }), rp.end());
        rp.push_back(0.0);
        return detail::log_integral_shifted(reflected, rp, true, "marginal_alt(reflected)");
    }
    if (lower_bounded) {
        points.erase(std::remove_if(points.begin(), points.end(), [](double x) { return x < 0.0; }),
                     points.end());
        points.push_back(0.0);
    }
    std::ostringstream ctx;
    ctx << "marginal_alt " << family_name(stat.family.kind) << " x=" << stat.value;
    return detail::log_integral_shifted(log_f, points, lower_bounded, ctx.str());
}

inline double marginal_alt(const TestStatistic& stat, const PriorSpec& prior) {
    return std::exp(log_marginal_alt(stat, prior));
}

inline WOE log_bf10(const TestStatistic& stat, const PriorSpec& prior) {
    return {log_marginal_alt(stat, prior) - log_null_density(stat)};
}

// Likelihood ratio against a simple alternative at lambda_star; the oracle
// benchmark for the operating-characteristics comparisons.
inline WOE log_bf10_ideal(const TestStatistic& stat, double lambda_star) {
    stat.validate();
    if (lambda_star == 0.0) return {0.0};
    return {log_density({stat.family, stat.value, lambda_star}) - log_null_density(stat)};
}

namespace detail {

inline void require_baseline_family(const TestStatistic& stat, const char* which) {
    const auto& f = stat.family;
    const bool ok = f.kind == Family::Z || f.kind == Family::T ||
                    (f.kind == Family::ChiSq && f.df1 == 1) ||
                    (f.kind == Family::F && f.df1 == 1);
    if (!ok)
        throw std::domain_error(std::string(which) +
                                " baseline supports z, t, chisq(1) and F(1, m) statistics only");
}

// Marginal over the z/t-scale non-centrality delta with the given symmetric
// prior; for chisq/F statistics the non-centrality is delta^2.
inline double log_marginal_delta(const TestStatistic& stat, const PriorSpec& delta_prior) {
    const bool squared = stat.family.nonnegative_support();
    auto log_f = [&](double delta) {
        const double lambda = squared ? delta * delta : delta;
        return log_density({stat.family, stat.value, lambda}) +
               prior_log_density(delta_prior, delta);
    };
    const double peak =
        squared ? std::sqrt(statistic_peak_lambda(stat)) : stat.value;
    std::vector<double> points{0.0, peak, -peak, 0.5 * peak, -0.5 * peak};
    for (double p : {1e-10, 1e-6, 1e-4, 0.01, 0.1, 0.25, 0.75, 0.9, 0.99, 1.0 - 1e-4,
                     1.0 - 1e-6, 1.0 - 1e-10})
        points.push_back(prior_quantile(delta_prior, p));
    std::ostringstream ctx;
    ctx << "baseline marginal " << family_name(stat.family.kind) << " x=" << stat.value;
    return log_integral_shifted(log_f, points, false, ctx.str());
}

} // namespace detail

// g-prior: normal prior with mean 0 and variance g on the z/t non-centrality
// (squared for chisq(1)/F(1, m)). z and chisq(1) have closed forms via the
// N(0, 1+g) marginal of z; t and F go through quadrature.
inline WOE log_bf10_gprior(const TestStatistic& stat, double g) {
    stat.validate();
    if (!(g > 0.0)) throw std::domain_error("g must be > 0");
    detail::require_baseline_family(stat, "g-prior");
    const double x = stat.value;
    switch (stat.family.kind) {
        case Family::Z:
            return {-0.5 * std::log1p(g) + x * x * g / (2.0 * (1.0 + g))};
        case Family::ChiSq:
            return {-0.5 * std::log1p(g) + x * g / (2.0 * (1.0 + g))};
        default:
            return {detail::log_marginal_delta(stat, PriorSpec::normal_g(g)) -
                    log_null_density(stat)};
    }
}

// Quadrature route for the gprior z/chisq closed forms; test oracle surface.
inline WOE log_bf10_gprior_quadrature(const TestStatistic& stat, double g) {
    stat.validate();
    if (!(g > 0.0)) throw std::domain_error("g must be > 0");
    detail::require_baseline_family(stat, "g-prior");
    return {detail::log_marginal_delta(stat, PriorSpec::normal_g(g)) - log_null_density(stat)};
}

// JZS baseline: Cauchy(0, r) prior on the z/t non-centrality (squared for
// chisq(1)/F(1, m)).
inline WOE log_bf10_jzs(const TestStatistic& stat, double r) {
    stat.validate();
    if (!(r > 0.0)) throw std::domain_error("r must be > 0");
    detail::require_baseline_family(stat, "JZS");
    return {detail::log_marginal_delta(stat, PriorSpec::cauchy_jzs(r)) - log_null_density(stat)};
}

// The row-calibrated alternative prior indexed by the standardized effect.
// chisq/F statistics always take the inverse-gamma prior on their own
// non-centrality; with a z/t row this is the squared-statistic equivalent of
// the two-sided inverse-moment test at the same tau and nu.
inline PriorSpec effect_prior(const TestStatistic& stat, double omega, double nu) {
    const double tau = tau_for_effect({stat.row, stat.sample, omega, nu});
    if (stat.family.nonnegative_support()) return PriorSpec::inverse_gamma(0.5 * nu, tau);
    return prior_for_row(stat.row, tau, nu, detail::support_for(stat.sidedness));
}

// BFF evaluation at one standardized effect; omega = 0 is the degenerate
// prior at the null, where the Bayes factor is 1.
inline WOE log_bf10_at_effect(const TestStatistic& stat, double omega, double nu) {
    const double w2 = is_vector_effect_row(stat.row) ? omega : omega * omega;
    if (w2 == 0.0) return {0.0};
    return log_bf10(stat, effect_prior(stat, omega, nu));
}

} // namespace bff
