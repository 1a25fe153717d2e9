#pragma once

// Expected-posterior-probability discrepancy between two prior predictive
// densities: D_EP(f||g) = int f^2/(f+g) dx, which equals int g^2/(f+g) dx.
// Under prior equipoise this is the expected posterior probability of the
// true model, and it indexes how separable two specifications are.

#include "bff/engine.hpp"
#include "bff/error.hpp"
#include "bff/math/quadrature.hpp"
#include "bff/math/roots.hpp"
#include "bff/priors.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace bff {

// A prior predictive density over the statistic's support: the null model,
// an alternative prior mixed through the sampling distribution, or an
// arbitrary log density sharing the family's support.
struct MarginalModel {
    StatFamily family;
    std::optional<PriorSpec> prior;  // nullopt = the null model f(x | 0)
    std::function<double(double)> custom_log_density;

    static MarginalModel null_model(StatFamily fam) { return {fam, std::nullopt, {}}; }
    static MarginalModel alternative(StatFamily fam, PriorSpec p) {
        return {fam, std::move(p), {}};
    }
    static MarginalModel custom(StatFamily fam, std::function<double(double)> log_pdf) {
        return {fam, std::nullopt, std::move(log_pdf)};
    }

    double log_density_at(double x) const {
        if (custom_log_density) return custom_log_density(x);
        if (!prior) return log_density({family, x, 0.0});
        TestStatistic stat;
        stat.family = family;
        stat.value = x;
        // Row metadata is irrelevant here; pick one matching the family so
        // validation passes.
        stat.row = family.kind == Family::T || family.kind == Family::F
                       ? (family.kind == Family::T ? TestRow::OneSampleT : TestRow::LinearModel)
                       : (family.kind == Family::Z ? TestRow::OneSampleZ
                                                   : TestRow::LikelihoodRatio);
        stat.sample = SampleSpec::one(1.0);
        return log_marginal_alt(stat, *prior);
    }
};

struct DepQuery {
    MarginalModel model_f;
    MarginalModel model_g;
};

namespace detail {

inline std::vector<double> dep_breakpoints(const DepQuery& q) {
    std::vector<double> pts{0.0};
    auto add_prior_scale = [&pts](const MarginalModel& m) {
        if (!m.prior) return;
        for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
            double lam = prior_quantile(*m.prior, p);
            if (m.family.nonnegative_support()) {
                if (lam > 0.0) pts.push_back(lam);
            } else {
                pts.push_back(lam);
            }
        }
    };
    add_prior_scale(q.model_f);
    add_prior_scale(q.model_g);
    if (q.model_f.family.nonnegative_support()) {
        pts.push_back(1.0);
        pts.push_back(4.0);
    } else {
        for (double s : {-3.0, -1.0, 1.0, 3.0}) pts.push_back(s);
    }
    return pts;
}

} // namespace detail

// D_EP by adaptive quadrature of f^2/(f+g) over the statistic support.
inline double dep(const DepQuery& q) {
    if (q.model_f.family != q.model_g.family)
        throw std::domain_error("dep: both marginals must share the statistic family");
    const bool lower_bounded = q.model_f.family.nonnegative_support();
    auto integrand = [&](double x) {
        if (lower_bounded && x <= 0.0) return 0.0;
        const double lf = q.model_f.log_density_at(x);
        const double lg = q.model_g.log_density_at(x);
        if (!std::isfinite(lf)) return 0.0;
        // f^2/(f+g) = f * sigmoid(lf - lg) in a stable form.
        const double f = std::exp(lf);
        if (!std::isfinite(lg)) return f;
        const double d = lg - lf;
        return d > 0.0 ? f * std::exp(-d) / (1.0 + std::exp(-d)) : f / (1.0 + std::exp(d));
    };
    auto pts = detail::dep_breakpoints(q);
    if (lower_bounded) {
        pts.erase(std::remove_if(pts.begin(), pts.end(), [](double x) { return x < 0.0; }),
                  pts.end());
        pts.push_back(0.0);
    }
    quad::Options opt;
    opt.rel_tol = 1e-8;
    const auto r = quad::integrate_with_tails(integrand, pts, lower_bounded, opt);
    return r.value;
}

// Calibrates the prior's dispersion hyperparameter so its IQR (two-sided) or
// median (one-sided) equals `index`, by monotone bisection.
inline PriorSpec calibrate_prior_to_index(const PriorSpec& prototype, double index) {
    if (!(index > 0.0)) throw std::domain_error("index value must be > 0");
    const bool use_iqr = prototype.support == Support::TwoSided;
    auto value_at = [&](double d) {
        const PriorSpec p = with_dispersion(prototype, d);
        return (use_iqr ? prior_iqr(p) : prior_median(p)) - index;
    };
    double lo = 1e-8, hi = 1.0;
    while (value_at(hi) < 0.0 && hi < 1e14) hi *= 4.0;
    while (value_at(lo) > 0.0 && lo > 1e-14) lo *= 0.25;
    if (value_at(lo) > 0.0 || value_at(hi) < 0.0)
        throw NumericError("calibrate_prior_to_index: dispersion root not bracketed");
    const double d = roots::bisect(value_at, lo, hi, 1e-12, 0.0);
    return with_dispersion(prototype, d);
}

struct DepComparison {
    double dep_a = 0.0;
    double dep_b = 0.0;
    PriorSpec prior_a;
    PriorSpec prior_b;
};

// Matches both priors to a common IQR/median index, then measures each one's
// D_EP against the null marginal. Larger values mean higher expected
// posterior support for the true model.
inline DepComparison dep_compare(const StatFamily& family, const PriorSpec& prior_a,
                                 const PriorSpec& prior_b, double index) {
    const PriorSpec a = calibrate_prior_to_index(prior_a, index);
    const PriorSpec b = calibrate_prior_to_index(prior_b, index);
    const auto null_m = MarginalModel::null_model(family);
    const double da = dep({null_m, MarginalModel::alternative(family, a)});
    const double db = dep({null_m, MarginalModel::alternative(family, b)});
    return {da, db, a, b};
}

} // namespace bff
