#pragma once

// Central and noncentral densities, distribution functions and samplers for
// the z, t, chi-squared and F families. Noncentral densities are evaluated
// in log space as discrete Poisson-style mixtures over central densities,
// iterating outward from the modal index so that large non-centralities do
// not underflow (cf. Benton & Krishnamoorthy, CSDA 43, 2003).

#include "bff/error.hpp"
#include "bff/math/quadrature.hpp"
#include "bff/math/rng.hpp"
#include "bff/math/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bff {

enum class Family { Z, T, ChiSq, F };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Z: return "z";
        case Family::T: return "t";
        case Family::ChiSq: return "chisq";
        case Family::F: return "f";
    }
    return "?";
}

// A statistic family together with its degrees of freedom. Z carries none,
// T carries df2, ChiSq carries df1, F carries both.
struct StatFamily {
    Family kind = Family::Z;
    int df1 = 0;
    int df2 = 0;

    static StatFamily z() { return {Family::Z, 0, 0}; }
    static StatFamily t(int df2) {
        StatFamily s{Family::T, 0, df2};
        s.validate();
        return s;
    }
    static StatFamily chisq(int df1) {
        StatFamily s{Family::ChiSq, df1, 0};
        s.validate();
        return s;
    }
    static StatFamily f(int df1, int df2) {
        StatFamily s{Family::F, df1, df2};
        s.validate();
        return s;
    }

    void validate() const {
        switch (kind) {
            case Family::Z:
                if (df1 != 0 || df2 != 0) throw std::domain_error("z statistic carries no df");
                break;
            case Family::T:
                if (df2 <= 0) throw std::domain_error("t statistic requires df2 > 0");
                if (df1 != 0) throw std::domain_error("t statistic carries no df1");
                break;
            case Family::ChiSq:
                if (df1 <= 0) throw std::domain_error("chi-squared statistic requires df1 > 0");
                if (df2 != 0) throw std::domain_error("chi-squared statistic carries no df2");
                break;
            case Family::F:
                if (df1 <= 0 || df2 <= 0) throw std::domain_error("F statistic requires df1, df2 > 0");
                break;
        }
    }

    bool nonnegative_support() const { return kind == Family::ChiSq || kind == Family::F; }

    bool operator==(const StatFamily&) const = default;
};

struct NoncentralDensityQuery {
    StatFamily family;
    double x = 0.0;
    double lambda = 0.0;
};

namespace detail {

inline void check_query(const NoncentralDensityQuery& q) {
    q.family.validate();
    if (q.family.nonnegative_support()) {
        if (q.lambda < 0.0) throw std::domain_error("non-centrality must be >= 0 for chisq/F");
        if (q.x < 0.0) throw std::domain_error("statistic value must be >= 0 for chisq/F");
    }
    if (!std::isfinite(q.x) || !std::isfinite(q.lambda))
        throw std::domain_error("non-finite statistic value or non-centrality");
}

inline double log_central_chisq_pdf(double x, double k) {
    if (x == 0.0) return k == 2.0 ? -std::log(2.0)
                                  : (k < 2.0 ? std::numeric_limits<double>::infinity()
                                             : -std::numeric_limits<double>::infinity());
    return (0.5 * k - 1.0) * std::log(x) - 0.5 * x - 0.5 * k * std::numbers::ln2 -
           sf::log_gamma(0.5 * k);
}

inline double log_central_t_pdf(double x, double k) {
    return sf::log_gamma(0.5 * (k + 1.0)) - sf::log_gamma(0.5 * k) -
           0.5 * std::log(k * std::numbers::pi) -
           0.5 * (k + 1.0) * std::log1p(x * x / k);
}

inline double log_central_f_pdf(double x, double d1, double d2) {
    const double a = 0.5 * d1, b = 0.5 * d2;
    if (x == 0.0) return a == 1.0 ? std::log(b * d1 / d2)
                                  : (a < 1.0 ? std::numeric_limits<double>::infinity()
                                             : -std::numeric_limits<double>::infinity());
    return sf::log_gamma(a + b) - sf::log_gamma(a) - sf::log_gamma(b) +
           a * std::log(d1 / d2) + (a - 1.0) * std::log(x) -
           (a + b) * std::log1p(d1 * x / d2);
}

// Relative truncation threshold for the mixture series.
inline constexpr double kSeriesTol = 1e-14;
inline constexpr int kSeriesMax = 2000000;

// Sums a two-sided series with positive terms and multiplicative index
// recurrences, starting from index j0 where the scaled term is 1. ratio_up(j)
// gives term(j+1)/term(j); ratio_down(j) gives term(j-1)/term(j).
template <class RUp, class RDown>
double sum_scaled_series(long j0, long j_min, const RUp& ratio_up, const RDown& ratio_down,
                         double& log_rescale) {
    log_rescale = 0.0;
    double sum = 1.0;
    double t = 1.0;
    double prev = 1.0;
    for (long j = j0; j - j0 < kSeriesMax; ++j) {
        const double r = ratio_up(j);
        prev = t;
        t *= r;
        if (!(t > 0.0)) break;
        sum += t;
        if (sum > 1e280) {
            sum *= 1e-280;
            t *= 1e-280;
            prev *= 1e-280;
            log_rescale += 280.0 * std::numbers::ln10;
        }
        if (t < kSeriesTol * sum && t <= prev) break;
    }
    t = 1.0;
    prev = 1.0;
    for (long j = j0; j > j_min; --j) {
        const double r = ratio_down(j);
        prev = t;
        t *= r;
        if (!(t > 0.0)) break;
        sum += t;
        if (sum > 1e280) {
            sum *= 1e-280;
            t *= 1e-280;
            prev *= 1e-280;
            log_rescale += 280.0 * std::numbers::ln10;
        }
        if (t < kSeriesTol * sum && t <= prev) break;
    }
    return sum;
}

// log pdf of a noncentral chi-squared with df k and non-centrality lambda:
// Poisson(lambda/2) mixture of central chi-squared pdfs with k+2j df.
inline double log_nc_chisq_pdf(double x, double k, double lambda) {
    if (lambda == 0.0) return log_central_chisq_pdf(x, k);
    if (x == 0.0) return log_central_chisq_pdf(x, k) - 0.5 * lambda;
    const double half_l = 0.5 * lambda;
    const long j0 = static_cast<long>(std::floor(half_l));
    const double log_t0 = -half_l + j0 * std::log(half_l) - sf::log_gamma(j0 + 1.0) +
                          log_central_chisq_pdf(x, k + 2.0 * j0);
    auto up = [&](long j) {
        return half_l * (0.5 * x) / ((j + 1.0) * (0.5 * k + j));
    };
    auto down = [&](long j) {
        return (j * (0.5 * k + j - 1.0)) / (half_l * 0.5 * x);
    };
    double rescale = 0.0;
    const double s = sum_scaled_series(j0, 0, up, down, rescale);
    return log_t0 + std::log(s) + rescale;
}

// log pdf of a noncentral F(d1, d2) with non-centrality lambda.
inline double log_nc_f_pdf(double x, double d1, double d2, double lambda) {
    if (lambda == 0.0) return log_central_f_pdf(x, d1, d2);
    if (x == 0.0) return log_central_f_pdf(x, d1, d2) - 0.5 * lambda;
    const double a = 0.5 * d1, b = 0.5 * d2;
    const double half_l = 0.5 * lambda;
    const double w = d1 * x / d2;
    const double u = w / (1.0 + w);
    const long j0 = static_cast<long>(std::floor(half_l));
    const double log_fj0 = sf::log_gamma(a + b + j0) - sf::log_gamma(a + j0) - sf::log_gamma(b) +
                           (a + j0) * std::log(w) - std::log(x) -
                           (a + b + j0) * std::log1p(w);
    const double log_t0 = -half_l + j0 * std::log(half_l) - sf::log_gamma(j0 + 1.0) + log_fj0;
    auto up = [&](long j) {
        return half_l / (j + 1.0) * (a + b + j) / (a + j) * u;
    };
    auto down = [&](long j) {
        return j / half_l * (a + j - 1.0) / (a + b + j - 1.0) / u;
    };
    double rescale = 0.0;
    const double s = sum_scaled_series(j0, 0, up, down, rescale);
    return log_t0 + std::log(s) + rescale;
}

// Numerically integrates the noncentral t density over the scaled-chi mixing
// variable, in log space. Used where the series representation cancels.
inline double log_nc_t_pdf_quadrature(double x, double k, double delta) {
    // f(t) = int_0^inf w phi(w t - delta) h_k(w) dw,
    // h_k(w) = 2 (k/2)^{k/2} / Gamma(k/2) w^{k-1} exp(-k w^2 / 2)
    const double log_h_norm =
        std::numbers::ln2 + 0.5 * k * std::log(0.5 * k) - sf::log_gamma(0.5 * k);
    auto log_integrand = [&](double w) {
        if (w <= 0.0) return -std::numeric_limits<double>::infinity();
        const double z = w * x - delta;
        return log_h_norm + k * std::log(w) - 0.5 * k * w * w -
               0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z;
    };
    // Stationary point of the log integrand: (x^2+k) w^2 - x delta w - k = 0.
    const double q = x * x + k;
    const double w_peak =
        (x * delta + std::sqrt(x * x * delta * delta + 4.0 * k * q)) / (2.0 * q);
    const double shift = log_integrand(w_peak);
    auto f = [&](double w) { return std::exp(log_integrand(w) - shift); };
    quad::Options opt;
    opt.rel_tol = 1e-12;
    const double width = w_peak / std::sqrt(k) + 1.0 / std::sqrt(q);
    std::vector<double> breaks{1e-300, 0.25 * w_peak, w_peak - width, w_peak,
                               w_peak + width, 2.0 * w_peak, 4.0 * w_peak + 4.0};
    std::erase_if(breaks, [&](double b) { return b <= 0.0; });
    breaks.push_back(1e-300);
    const auto r = quad::integrate_with_tails(f, breaks, true, opt);
    return shift + std::log(r.value);
}

// log pdf of a noncentral t with df k and non-centrality delta. Expansion of
// exp(t w delta) inside the scale-mixture integral gives
//   f(t) = C * sum_j (t delta s)^j / j! * Gamma((k+j+1)/2),  s = sqrt(2/(k+t^2)),
//   C = exp(-delta^2/2) (k/2)^{k/2} (2/(k+t^2))^{(k+1)/2} / (sqrt(2 pi) Gamma(k/2)).
// Even and odd sub-series have clean two-step recurrences. For t*delta < 0 the
// series alternates; if it cancels we fall back to direct quadrature.
inline double log_nc_t_pdf(double x, double k, double delta) {
    if (delta == 0.0) return log_central_t_pdf(x, k);
    const double s2 = 2.0 / (k + x * x);
    const double a = x * delta * std::sqrt(s2);
    const double a2 = a * a;
    const double log_c = -0.5 * delta * delta + 0.5 * k * std::log(0.5 * k) +
                         0.5 * (k + 1.0) * std::log(s2) -
                         0.5 * std::log(2.0 * std::numbers::pi) - sf::log_gamma(0.5 * k);
    if (a == 0.0) return log_c + sf::log_gamma(0.5 * (k + 1.0));  // only the j = 0 term

    // Even terms e_m = a^{2m}/(2m)! Gamma((k+2m+1)/2), m >= 0.
    auto even_up = [&](long m) {
        return a2 * (k + 2.0 * m + 1.0) / (2.0 * (2.0 * m + 1.0) * (2.0 * m + 2.0));
    };
    auto even_down = [&](long m) {
        return 2.0 * (2.0 * m - 1.0) * (2.0 * m) / (a2 * (k + 2.0 * m - 1.0));
    };
    // Odd terms o_m = |a|^{2m+1}/(2m+1)! Gamma((k+2m+2)/2), m >= 0.
    auto odd_up = [&](long m) {
        return a2 * (k + 2.0 * m + 2.0) / (2.0 * (2.0 * m + 2.0) * (2.0 * m + 3.0));
    };
    auto odd_down = [&](long m) {
        return 2.0 * (2.0 * m) * (2.0 * m + 1.0) / (a2 * (k + 2.0 * m));
    };
    // Start both sub-series near their largest term: ratio crosses 1 around
    // m* with (2m)^2 ~ a^2 (k + 2m)/2.
    const double abs_a = std::abs(a);
    long m0 = static_cast<long>(0.25 * (abs_a * abs_a / 2.0 +
                                        abs_a * std::sqrt(abs_a * abs_a / 4.0 + 2.0 * k)));
    if (m0 < 0) m0 = 0;

    double resc_e = 0.0, resc_o = 0.0;
    const double log_e0 =
        2.0 * m0 * std::log(abs_a) - sf::log_gamma(2.0 * m0 + 1.0) +
        sf::log_gamma(0.5 * (k + 2.0 * m0 + 1.0));
    const double sum_e = sum_scaled_series(m0, 0, even_up, even_down, resc_e);
    const double log_even = log_e0 + std::log(sum_e) + resc_e;

    const double log_o0 =
        (2.0 * m0 + 1.0) * std::log(abs_a) - sf::log_gamma(2.0 * m0 + 2.0) +
        sf::log_gamma(0.5 * (k + 2.0 * m0 + 2.0));
    const double sum_o = sum_scaled_series(m0, 0, odd_up, odd_down, resc_o);
    const double log_odd = log_o0 + std::log(sum_o) + resc_o;

    if (a >= 0.0) {
        const double hi = std::max(log_even, log_odd);
        return log_c + hi + std::log(std::exp(log_even - hi) + std::exp(log_odd - hi));
    }
    // Alternating: f = C (E - O). The difference loses about the relative
    // error of the sub-series divided by (1 - O/E); switch to quadrature
    // before that exceeds ~1e-13.
    const double d = std::exp(log_odd - log_even);
    if (!(d < 1.0 - 1e-2)) return log_nc_t_pdf_quadrature(x, k, delta);
    return log_c + log_even + std::log1p(-d);
}

} // namespace detail

// Natural log of f(x | lambda) for the query's family. Stays finite where the
// plain density underflows.
inline double log_density(const NoncentralDensityQuery& q) {
    detail::check_query(q);
    switch (q.family.kind) {
        case Family::Z:
            return sf::log_normal_pdf(q.x, q.lambda);
        case Family::T:
            return detail::log_nc_t_pdf(q.x, q.family.df2, q.lambda);
        case Family::ChiSq:
            return detail::log_nc_chisq_pdf(q.x, q.family.df1, q.lambda);
        case Family::F:
            return detail::log_nc_f_pdf(q.x, q.family.df1, q.family.df2, q.lambda);
    }
    throw std::logic_error("unreachable");
}

inline double density(const NoncentralDensityQuery& q) { return std::exp(log_density(q)); }

inline double cdf(const StatFamily& fam, double x, double lambda) {
    detail::check_query({fam, fam.nonnegative_support() ? std::max(x, 0.0) : x, lambda});
    using namespace boost::math;
    switch (fam.kind) {
        case Family::Z:
            return cdf(normal_distribution<double>(lambda, 1.0), x);
        case Family::T:
            return lambda == 0.0
                       ? cdf(students_t_distribution<double>(fam.df2), x)
                       : cdf(non_central_t_distribution<double>(fam.df2, lambda), x);
        case Family::ChiSq:
            if (x <= 0.0) return 0.0;
            return lambda == 0.0
                       ? cdf(chi_squared_distribution<double>(fam.df1), x)
                       : cdf(non_central_chi_squared_distribution<double>(fam.df1, lambda), x);
        case Family::F:
            if (x <= 0.0) return 0.0;
            return lambda == 0.0
                       ? cdf(fisher_f_distribution<double>(fam.df1, fam.df2), x)
                       : cdf(non_central_f_distribution<double>(fam.df1, fam.df2, lambda), x);
    }
    throw std::logic_error("unreachable");
}

inline double quantile(const StatFamily& fam, double p, double lambda) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile needs p in (0,1)");
    using namespace boost::math;
    switch (fam.kind) {
        case Family::Z:
            return lambda + quantile(normal_distribution<double>(), p);
        case Family::T:
            return lambda == 0.0
                       ? quantile(students_t_distribution<double>(fam.df2), p)
                       : quantile(non_central_t_distribution<double>(fam.df2, lambda), p);
        case Family::ChiSq:
            return lambda == 0.0
                       ? quantile(chi_squared_distribution<double>(fam.df1), p)
                       : quantile(non_central_chi_squared_distribution<double>(fam.df1, lambda), p);
        case Family::F:
            return lambda == 0.0
                       ? quantile(fisher_f_distribution<double>(fam.df1, fam.df2), p)
                       : quantile(non_central_f_distribution<double>(fam.df1, fam.df2, lambda), p);
    }
    throw std::logic_error("unreachable");
}

// One draw from the noncentral distribution. Noncentral chi-squared is built
// as (Z + sqrt(lambda))^2 plus an independent central chi-squared with df-1
// degrees of freedom; noncentral F as the ratio of scaled chi-squareds.
inline double sample(const StatFamily& fam, double lambda, RngStream& rng) {
    detail::check_query({fam, 0.0, lambda});
    switch (fam.kind) {
        case Family::Z:
            return lambda + rng.normal();
        case Family::T: {
            const double z = rng.normal() + lambda;
            const double v = rng.chi_squared(fam.df2);
            return z / std::sqrt(v / fam.df2);
        }
        case Family::ChiSq: {
            const double z = rng.normal() + std::sqrt(lambda);
            double out = z * z;
            if (fam.df1 > 1) out += rng.chi_squared(fam.df1 - 1.0);
            return out;
        }
        case Family::F: {
            const double z = rng.normal() + std::sqrt(lambda);
            double num = z * z;
            if (fam.df1 > 1) num += rng.chi_squared(fam.df1 - 1.0);
            const double den = rng.chi_squared(fam.df2);
            return (num / fam.df1) / (den / fam.df2);
        }
    }
    throw std::logic_error("unreachable");
}

} // namespace bff
