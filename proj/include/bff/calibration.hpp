#pragma once

// Hyperparameter calibration: maps a standardized effect to the prior
// dispersion that places the prior mode at the test's non-centrality
// parameter, one mapping per supported test row. Also the gamma-probability
// criterion that selects the default nu.

#include "bff/error.hpp"
#include "bff/math/roots.hpp"
#include "bff/math/special.hpp"
#include "bff/priors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bff {

enum class TestRow {
    OneSampleZ,
    OneSampleT,
    TwoSampleZ,
    TwoSampleT,
    MultinomialPoisson,  // chi-squared statistic, omega is a vector effect
    LinearModel,         // F statistic
    LikelihoodRatio      // chi-squared statistic
};

inline const char* test_row_name(TestRow r) {
    switch (r) {
        case TestRow::OneSampleZ: return "one-sample-z";
        case TestRow::OneSampleT: return "one-sample-t";
        case TestRow::TwoSampleZ: return "two-sample-z";
        case TestRow::TwoSampleT: return "two-sample-t";
        case TestRow::MultinomialPoisson: return "multinomial-poisson";
        case TestRow::LinearModel: return "linear-model";
        case TestRow::LikelihoodRatio: return "likelihood-ratio";
    }
    return "?";
}

inline bool is_two_sample(TestRow r) {
    return r == TestRow::TwoSampleZ || r == TestRow::TwoSampleT;
}

inline bool is_vector_effect_row(TestRow r) {
    return r == TestRow::MultinomialPoisson || r == TestRow::LinearModel ||
           r == TestRow::LikelihoodRatio;
}

// One- or two-group sample sizes.
struct SampleSpec {
    double n1 = 0.0;
    double n2 = 0.0;  // 0 means one-sample

    static SampleSpec one(double n) {
        if (!(n > 0.0)) throw std::domain_error("sample size must be > 0");
        return {n, 0.0};
    }
    static SampleSpec two(double n1, double n2) {
        if (!(n1 > 0.0) || !(n2 > 0.0)) throw std::domain_error("sample sizes must be > 0");
        return {n1, n2};
    }
    bool two_sample() const { return n2 > 0.0; }
    double total() const { return n1 + n2; }
};

struct EffectCalibration {
    TestRow row = TestRow::OneSampleZ;
    SampleSpec sizes;
    double omega = 0.0;  // omega, or omega'omega for vector rows
    double nu = 9.0;
};

// The sample quantity n_eff with n_eff * omega^2 equal to the squared z/t
// non-centrality (or the chi-squared/F non-centrality itself); it drives
// omega_min = sqrt(6 / n_eff).
inline double n_effective(TestRow row, const SampleSpec& sizes) {
    if (is_two_sample(row)) {
        if (!sizes.two_sample()) throw std::domain_error("two-sample row requires n1 and n2");
        if (!(sizes.n1 > 0.0) || !(sizes.n2 > 0.0))
            throw std::domain_error("sample sizes must be > 0");
        return 2.0 * sizes.n1 * sizes.n2 / (sizes.n1 + sizes.n2);
    }
    if (sizes.two_sample()) throw std::domain_error("one-sample row takes a single n");
    if (!(sizes.n1 > 0.0)) throw std::domain_error("sample size must be > 0");
    return sizes.n1;
}

// tau_{omega,nu} exactly as tabulated: the dispersion that places the prior
// mode at the row's non-centrality parameter.
inline double tau_for_effect(const EffectCalibration& cal) {
    if (!(cal.nu > 0.0)) throw std::domain_error("nu must be > 0");
    if (is_vector_effect_row(cal.row) && cal.omega < 0.0)
        throw std::domain_error("omega'omega must be >= 0");
    const double w2 = is_vector_effect_row(cal.row) ? cal.omega : cal.omega * cal.omega;
    switch (cal.row) {
        case TestRow::OneSampleZ:
        case TestRow::OneSampleT:
            return n_effective(cal.row, cal.sizes) * w2 * (cal.nu + 1.0) / 2.0;
        case TestRow::TwoSampleZ:
        case TestRow::TwoSampleT: {
            if (!cal.sizes.two_sample()) throw std::domain_error("two-sample row requires n1, n2");
            return cal.sizes.n1 * cal.sizes.n2 * w2 * (cal.nu + 1.0) / cal.sizes.total();
        }
        case TestRow::MultinomialPoisson:
        case TestRow::LinearModel:
        case TestRow::LikelihoodRatio:
            // Inverse-gamma scale with mode tau/(nu/2+1) at n omega'omega.
            return cal.sizes.n1 * w2 * (0.5 * cal.nu + 1.0);
    }
    throw std::logic_error("unreachable");
}

// The prior the row calibrates: inverse-moment on the z/t non-centrality,
// inverse-gamma on the chi-squared/F non-centrality.
inline PriorSpec prior_for_row(TestRow row, double tau, double nu,
                               Support support = Support::TwoSided) {
    if (is_vector_effect_row(row)) return PriorSpec::inverse_gamma(0.5 * nu, tau);
    return PriorSpec::inverse_moment(tau, nu, support);
}

// Probability the inverse-moment prior with mode at the medium effect puts on
// non-centralities between the small and large effects; reduces to an
// inverse-gamma (shape nu/2, scale 1) integral over (c, d).
inline double nu_criterion_mass(double nu, double small = 0.2, double large = 0.8,
                                double medium = 0.5) {
    if (!(nu > 0.0)) throw std::domain_error("nu must be > 0");
    const double c = 2.0 * (small / medium) * (small / medium) / (nu + 1.0);
    const double d = 2.0 * (large / medium) * (large / medium) / (nu + 1.0);
    // P(c <= Y <= d) for Y ~ IG(nu/2, 1) equals P(1/d <= X <= 1/c), X ~ Gamma(nu/2).
    return sf::gamma_p(0.5 * nu, 1.0 / c) - sf::gamma_p(0.5 * nu, 1.0 / d);
}

// Continuous root of nu_criterion_mass(nu) = gamma on [0.1, 100].
inline double select_nu(double gamma, double small = 0.2, double large = 0.8,
                        double medium = 0.5) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("gamma must lie in (0,1)");
    if (!(0.0 < small && small < medium && medium < large))
        throw std::domain_error("need 0 < small < medium < large");
    auto resid = [&](double nu) { return nu_criterion_mass(nu, small, large, medium) - gamma; };
    return roots::find_root_scan(resid, 0.1, 100.0, 400, 1e-12, 1e-6);
}

// The smallest integer nu whose prior assigns at least gamma; with the mass
// increasing in nu this is the ceiling of the continuous root, and matches
// the published default of 9 at gamma = 0.9.
inline int select_nu_integer(double gamma, double small = 0.2, double large = 0.8,
                             double medium = 0.5) {
    const double root = select_nu(gamma, small, large, medium);
    int nu = static_cast<int>(std::ceil(root - 1e-9));
    if (nu < 1) nu = 1;
    return nu;
}

} // namespace bff
