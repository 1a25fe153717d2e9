#pragma once

// Alternative-hypothesis priors on the non-centrality parameter: the
// inverse-moment family, its inverse-gamma companion for chi-squared/F
// non-centralities, and the normal (g-prior) and Cauchy baselines.

#include "bff/error.hpp"
#include "bff/math/rng.hpp"
#include "bff/math/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

namespace bff {

enum class Support { TwoSided, PositiveOnly, NegativeOnly };

// i(lambda | tau, nu) = tau^{nu/2}/Gamma(nu/2) (lambda^2)^{-(nu+1)/2} exp(-tau/lambda^2)
struct InverseMoment {
    double tau = 1.0;
    double nu = 9.0;
};

// IG(shape, scale) on lambda >= 0; shape = nu/2, scale = tau.
struct InverseGammaPrior {
    double shape = 4.5;
    double scale = 1.0;
};

// N(0, g) on the z/t non-centrality.
struct NormalG {
    double g = 1.0;
};

// Cauchy(0, r) on the non-centrality.
struct CauchyJZS {
    double r = 1.0;
};

struct PriorSpec {
    std::variant<InverseMoment, InverseGammaPrior, NormalG, CauchyJZS> dist;
    Support support = Support::TwoSided;

    static PriorSpec inverse_moment(double tau, double nu, Support s = Support::TwoSided) {
        PriorSpec p{InverseMoment{tau, nu}, s};
        p.validate();
        return p;
    }
    static PriorSpec inverse_gamma(double shape, double scale) {
        PriorSpec p{InverseGammaPrior{shape, scale}, Support::PositiveOnly};
        p.validate();
        return p;
    }
    static PriorSpec normal_g(double g, Support s = Support::TwoSided) {
        PriorSpec p{NormalG{g}, s};
        p.validate();
        return p;
    }
    static PriorSpec cauchy_jzs(double r, Support s = Support::TwoSided) {
        PriorSpec p{CauchyJZS{r}, s};
        p.validate();
        return p;
    }

    void validate() const {
        if (const auto* im = std::get_if<InverseMoment>(&dist)) {
            if (!(im->tau > 0.0) || !(im->nu > 0.0))
                throw std::domain_error("inverse-moment prior requires tau > 0 and nu > 0");
        } else if (const auto* ig = std::get_if<InverseGammaPrior>(&dist)) {
            if (!(ig->shape > 0.0) || !(ig->scale > 0.0))
                throw std::domain_error("inverse-gamma prior requires shape > 0 and scale > 0");
            if (support != Support::PositiveOnly)
                throw std::domain_error("inverse-gamma prior lives on lambda >= 0");
        } else if (const auto* ng = std::get_if<NormalG>(&dist)) {
            if (!(ng->g > 0.0)) throw std::domain_error("g-prior requires g > 0");
        } else if (const auto* cz = std::get_if<CauchyJZS>(&dist)) {
            if (!(cz->r > 0.0)) throw std::domain_error("Cauchy prior requires r > 0");
        }
    }

    bool positive_only() const { return support == Support::PositiveOnly; }
};

// Modes +-sqrt(2 tau / (nu + 1)) of the inverse-moment density.
inline std::pair<double, double> im_modes(double tau, double nu) {
    if (!(tau > 0.0) || !(nu > 0.0)) throw std::domain_error("im_modes: tau, nu must be > 0");
    const double m = std::sqrt(2.0 * tau / (nu + 1.0));
    return {-m, m};
}

namespace detail {

inline double side_factor(Support s, double lambda) {
    switch (s) {
        case Support::TwoSided: return 1.0;
        case Support::PositiveOnly: return lambda > 0.0 ? 2.0 : 0.0;
        case Support::NegativeOnly: return lambda < 0.0 ? 2.0 : 0.0;
    }
    return 0.0;
}

} // namespace detail

inline double prior_log_density(const PriorSpec& p, double lambda) {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    if (const auto* im = std::get_if<InverseMoment>(&p.dist)) {
        const double side = detail::side_factor(p.support, lambda);
        if (lambda == 0.0 || side == 0.0) return neg_inf;
        const double l2 = lambda * lambda;
        return std::log(side) + 0.5 * im->nu * std::log(im->tau) - sf::log_gamma(0.5 * im->nu) -
               (im->nu + 1.0) * std::log(std::abs(lambda)) - im->tau / l2;
    }
    if (const auto* ig = std::get_if<InverseGammaPrior>(&p.dist)) {
        if (lambda <= 0.0) return neg_inf;
        return ig->shape * std::log(ig->scale) - sf::log_gamma(ig->shape) -
               (ig->shape + 1.0) * std::log(lambda) - ig->scale / lambda;
    }
    if (const auto* ng = std::get_if<NormalG>(&p.dist)) {
        const double side = detail::side_factor(p.support, lambda);
        if (side == 0.0) return neg_inf;
        return std::log(side) + sf::log_normal_pdf(lambda, 0.0, std::sqrt(ng->g));
    }
    const auto& cz = std::get<CauchyJZS>(p.dist);
    const double side = detail::side_factor(p.support, lambda);
    if (side == 0.0) return neg_inf;
    return std::log(side) + sf::log_cauchy_pdf(lambda, cz.r);
}

inline double prior_density(const PriorSpec& p, double lambda) {
    return std::exp(prior_log_density(p, lambda));
}

// Closed-form distribution functions. For the inverse-moment family this uses
// W^2 ~ IG(nu/2, tau), i.e. the regularized incomplete gamma function.
inline double prior_cdf(const PriorSpec& p, double lambda) {
    if (const auto* im = std::get_if<InverseMoment>(&p.dist)) {
        const double a = 0.5 * im->nu;
        auto pos_mass_below = [&](double w) {  // P(0 < W <= w) for the unsigned half
            return w <= 0.0 ? 0.0 : sf::gamma_q(a, im->tau / (w * w));
        };
        switch (p.support) {
            case Support::TwoSided:
                if (lambda >= 0.0) return 0.5 + 0.5 * pos_mass_below(lambda);
                return 0.5 * sf::gamma_p(a, im->tau / (lambda * lambda));
            case Support::PositiveOnly:
                return pos_mass_below(lambda);
            case Support::NegativeOnly:
                return lambda >= 0.0 ? 1.0 : sf::gamma_p(a, im->tau / (lambda * lambda));
        }
    }
    if (const auto* ig = std::get_if<InverseGammaPrior>(&p.dist)) {
        return lambda <= 0.0 ? 0.0 : sf::gamma_q(ig->shape, ig->scale / lambda);
    }
    if (const auto* ng = std::get_if<NormalG>(&p.dist)) {
        const double u = sf::normal_cdf(lambda / std::sqrt(ng->g));
        switch (p.support) {
            case Support::TwoSided: return u;
            case Support::PositiveOnly: return lambda <= 0.0 ? 0.0 : 2.0 * (u - 0.5);
            case Support::NegativeOnly: return lambda >= 0.0 ? 1.0 : 2.0 * u;
        }
    }
    const auto& cz = std::get<CauchyJZS>(p.dist);
    const double u = 0.5 + std::atan(lambda / cz.r) / std::numbers::pi;
    switch (p.support) {
        case Support::TwoSided: return u;
        case Support::PositiveOnly: return lambda <= 0.0 ? 0.0 : 2.0 * (u - 0.5);
        case Support::NegativeOnly: return lambda >= 0.0 ? 1.0 : 2.0 * u;
    }
    return u;
}

inline double prior_quantile(const PriorSpec& p, double prob) {
    if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("prior_quantile needs p in (0,1)");
    if (const auto* im = std::get_if<InverseMoment>(&p.dist)) {
        const double a = 0.5 * im->nu;
        auto pos_quantile = [&](double q) {  // quantile of the unsigned half
            return std::sqrt(im->tau / sf::gamma_q_inv(a, q));
        };
        switch (p.support) {
            case Support::TwoSided:
                if (prob == 0.5) return 0.0;
                if (prob > 0.5) return pos_quantile(2.0 * prob - 1.0);
                return -std::sqrt(im->tau / sf::gamma_p_inv(a, 2.0 * prob));
            case Support::PositiveOnly:
                return pos_quantile(prob);
            case Support::NegativeOnly:
                return -pos_quantile(1.0 - prob);
        }
    }
    if (const auto* ig = std::get_if<InverseGammaPrior>(&p.dist)) {
        return ig->scale / sf::gamma_q_inv(ig->shape, prob);
    }
    if (const auto* ng = std::get_if<NormalG>(&p.dist)) {
        const double sd = std::sqrt(ng->g);
        switch (p.support) {
            case Support::TwoSided: return sd * sf::normal_quantile(prob);
            case Support::PositiveOnly: return sd * sf::normal_quantile(0.5 * (1.0 + prob));
            case Support::NegativeOnly: return sd * sf::normal_quantile(0.5 * prob);
        }
    }
    const auto& cz = std::get<CauchyJZS>(p.dist);
    switch (p.support) {
        case Support::TwoSided:
            return cz.r * std::tan(std::numbers::pi * (prob - 0.5));
        case Support::PositiveOnly:
            return cz.r * std::tan(0.5 * std::numbers::pi * prob);
        case Support::NegativeOnly:
            return -cz.r * std::tan(0.5 * std::numbers::pi * (1.0 - prob));
    }
    throw std::logic_error("unreachable");
}

// Interquartile range; the index for two-sided priors.
inline double prior_iqr(const PriorSpec& p) {
    return prior_quantile(p, 0.75) - prior_quantile(p, 0.25);
}

// Median; the index for one-sided priors.
inline double prior_median(const PriorSpec& p) { return prior_quantile(p, 0.5); }

inline double prior_sample(const PriorSpec& p, RngStream& rng) {
    auto apply_sign = [&](double w) {
        switch (p.support) {
            case Support::TwoSided: return rng.uniform01() < 0.5 ? -w : w;
            case Support::PositiveOnly: return w;
            case Support::NegativeOnly: return -w;
        }
        return w;
    };
    if (const auto* im = std::get_if<InverseMoment>(&p.dist)) {
        const double g = rng.gamma(0.5 * im->nu);
        return apply_sign(std::sqrt(im->tau / g));
    }
    if (const auto* ig = std::get_if<InverseGammaPrior>(&p.dist)) {
        return ig->scale / rng.gamma(ig->shape);
    }
    if (const auto* ng = std::get_if<NormalG>(&p.dist)) {
        const double z = std::sqrt(ng->g) * rng.normal();
        return p.support == Support::TwoSided ? z : apply_sign(std::abs(z));
    }
    const auto& cz = std::get<CauchyJZS>(p.dist);
    if (p.support == Support::TwoSided) return rng.cauchy(cz.r);
    return apply_sign(std::abs(rng.cauchy(cz.r)));
}

// Density peaks, used by the marginal integrator to seed interval splits.
inline std::vector<double> prior_modes(const PriorSpec& p) {
    if (const auto* im = std::get_if<InverseMoment>(&p.dist)) {
        const auto [lo, hi] = im_modes(im->tau, im->nu);
        switch (p.support) {
            case Support::TwoSided: return {lo, hi};
            case Support::PositiveOnly: return {hi};
            case Support::NegativeOnly: return {lo};
        }
    }
    if (const auto* ig = std::get_if<InverseGammaPrior>(&p.dist)) {
        return {ig->scale / (ig->shape + 1.0)};
    }
    switch (p.support) {
        case Support::TwoSided: return {0.0};
        case Support::PositiveOnly: return {prior_quantile(p, 0.25)};
        case Support::NegativeOnly: return {prior_quantile(p, 0.75)};
    }
    return {0.0};
}

// Rebuilds the prior with a new dispersion hyperparameter (tau, scale, g or
// r). Shape-like parameters (nu) are preserved.
inline PriorSpec with_dispersion(const PriorSpec& p, double d) {
    if (!(d > 0.0)) throw std::domain_error("dispersion must be > 0");
    PriorSpec out = p;
    if (const auto* im = std::get_if<InverseMoment>(&p.dist))
        out.dist = InverseMoment{d, im->nu};
    else if (const auto* ig = std::get_if<InverseGammaPrior>(&p.dist))
        out.dist = InverseGammaPrior{ig->shape, d};
    else if (std::holds_alternative<NormalG>(p.dist))
        out.dist = NormalG{d};
    else
        out.dist = CauchyJZS{d};
    return out;
}

} // namespace bff
