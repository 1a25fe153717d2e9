#pragma once

#include "bff/error.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace bff::roots {

// Bisection on a bracketing interval [lo, hi] with f(lo), f(hi) of opposite
// sign. Converges on |f| <= f_tol or interval width <= x_tol.
template <class F>
double bisect(const F& f, double lo, double hi, double x_tol = 1e-12, double f_tol = 0.0,
              int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericError("bisect: interval does not bracket a root");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) <= f_tol || (hi - lo) <= x_tol * (1.0 + std::abs(mid))) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Scans [lo, hi] in n steps for a sign change of f, then bisects. Used when
// monotonicity is expected but not assumed.
template <class F>
double find_root_scan(const F& f, double lo, double hi, int n_scan, double x_tol = 1e-12,
                      double f_tol = 0.0) {
    double x_prev = lo, f_prev = f(lo);
    if (f_prev == 0.0) return lo;
    for (int i = 1; i <= n_scan; ++i) {
        const double x = lo + (hi - lo) * i / n_scan;
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) != (f_prev > 0.0)) return bisect(f, x_prev, x, x_tol, f_tol);
        x_prev = x;
        f_prev = fx;
    }
    throw NumericError("find_root_scan: no sign change in bracket");
}

// Golden-section maximization of a unimodal f on [a, b] to width x_tol.
template <class F>
std::pair<double, double> golden_max(const F& f, double a, double b, double x_tol = 1e-6) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

} // namespace bff::roots
