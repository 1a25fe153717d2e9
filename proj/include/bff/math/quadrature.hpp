#pragma once

#include "bff/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace bff::quad {

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

namespace detail {

// 15-point Gauss-Kronrod rule (QUADPACK dqk15 abscissae/weights).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(const F& f, double a, double b, double& integral, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    integral = resk * h;
    const double diff = std::abs((resk - resg) * h);
    // QUADPACK-style sharpened error estimate.
    resabs *= std::abs(h);
    err = (resabs > 0.0 && diff > 0.0)
              ? resabs * std::min(1.0, std::pow(200.0 * diff / resabs, 1.5))
              : diff;
    err = std::max(err, std::numeric_limits<double>::epsilon() * 50.0 * resabs);
}

struct Interval {
    double a, b, integral, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

} // namespace detail

// Globally adaptive integration over a union of finite segments. The heap is
// shared across segments so the tolerance applies to the total.
template <class F>
Result integrate_segments(const F& f, const std::vector<double>& breaks, const Options& opt = {}) {
    if (breaks.size() < 2) throw std::invalid_argument("integrate_segments: need >= 2 breakpoints");
    std::priority_queue<detail::Interval> heap;
    double total = 0.0, total_err = 0.0;
    int n_intervals = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i] < breaks[i + 1]))
            throw std::invalid_argument("integrate_segments: breakpoints must be strictly increasing");
        detail::Interval iv{breaks[i], breaks[i + 1], 0.0, 0.0};
        detail::gk15(f, iv.a, iv.b, iv.integral, iv.error);
        total += iv.integral;
        total_err += iv.error;
        heap.push(iv);
        ++n_intervals;
    }
    auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (total_err > tolerance() && n_intervals < opt.max_intervals) {
        detail::Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            // Interval at floating point resolution; keep its estimate as is.
            worst.error = 0.0;
            total_err = worst.error;
            for (auto tmp = heap; !tmp.empty(); tmp.pop()) total_err += tmp.top().error;
            heap.push(worst);
            continue;
        }
        detail::Interval left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.integral, left.error);
        detail::gk15(f, right.a, right.b, right.integral, right.error);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n_intervals;
    }
    if (total_err > tolerance()) {
        std::ostringstream msg;
        msg << "adaptive quadrature did not converge: estimate=" << total
            << " error=" << total_err << " tolerance=" << tolerance()
            << " intervals=" << n_intervals;
        throw NumericError(msg.str());
    }
    return {total, total_err, n_intervals};
}

template <class F>
Result integrate(const F& f, double a, double b, const Options& opt = {}) {
    return integrate_segments(f, std::vector<double>{a, b}, opt);
}

// Integral over (m, +inf) via lambda = m + u/(1-u^2), u in (0,1); the
// Jacobian (1+u^2)/(1-u^2)^2 regularizes polynomial tails. Nodes rounding
// onto u = 1 carry vanishing measure and are dropped.
template <class F>
Result integrate_upper_tail(const F& f, double m, const Options& opt = {}) {
    auto g = [&f, m](double u) {
        const double om = 1.0 - u * u;
        if (!(om > 0.0)) return 0.0;
        const double x = m + u / om;
        const double jac = (1.0 + u * u) / (om * om);
        const double v = f(x) * jac;
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(g, 0.0, 1.0, opt);
}

// Integral over (-inf, m).
template <class F>
Result integrate_lower_tail(const F& f, double m, const Options& opt = {}) {
    auto g = [&f, m](double u) {
        const double om = 1.0 - u * u;
        if (!(om > 0.0)) return 0.0;
        const double x = m - u / om;
        const double jac = (1.0 + u * u) / (om * om);
        const double v = f(x) * jac;
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(g, 0.0, 1.0, opt);
}

// Full integral over the real line (or half line) with interior breakpoints.
// `lower_bounded` pins the domain to [breaks.front(), +inf).
template <class F>
Result integrate_with_tails(const F& f, std::vector<double> interior, bool lower_bounded,
                            const Options& opt = {}) {
    std::sort(interior.begin(), interior.end());
    interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
    if (interior.empty()) throw std::invalid_argument("integrate_with_tails: no breakpoints");
    Result total;
    auto add = [&total](const Result& r) {
        total.value += r.value;
        total.error += r.error;
        total.intervals += r.intervals;
    };
    if (interior.size() >= 2) add(integrate_segments(f, interior, opt));
    add(integrate_upper_tail(f, interior.back(), opt));
    if (!lower_bounded) add(integrate_lower_tail(f, interior.front(), opt));
    return total;
}

} // namespace bff::quad
