#pragma once

// Thin aliases over Boost.Math special functions and the central/noncentral
// distribution CDFs / quantiles. Everything the library needs from Boost is
// funnelled through here.

#include <boost/math/distributions/cauchy.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/distributions/non_central_f.hpp>
#include <boost/math/distributions/non_central_t.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace bff::sf {

inline double log_gamma(double a) { return std::lgamma(a); }

// Regularized incomplete gamma P(a, x) and Q(a, x) = 1 - P(a, x).
inline double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }
inline double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }
inline double gamma_p_inv(double a, double p) { return boost::math::gamma_p_inv(a, p); }
inline double gamma_q_inv(double a, double q) { return boost::math::gamma_q_inv(a, q); }

// Median of Gamma(a, 1).
inline double gamma_median(double a) { return boost::math::gamma_p_inv(a, 0.5); }

inline double normal_cdf(double x) {
    return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}
inline double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

inline double log_normal_pdf(double x, double mean = 0.0, double sd = 1.0) {
    const double z = (x - mean) / sd;
    return -0.5 * std::log(2.0 * std::numbers::pi) - std::log(sd) - 0.5 * z * z;
}

inline double log_cauchy_pdf(double x, double scale) {
    return -std::log(std::numbers::pi * scale * (1.0 + (x / scale) * (x / scale)));
}

} // namespace bff::sf
