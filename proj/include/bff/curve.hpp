#pragma once

// Bayes factor functions over a grid of standardized effects, the
// omega_min = sqrt(6/n) reporting threshold, constrained maxima, and the
// evidence bands used to describe them.

#include "bff/engine.hpp"
#include "bff/error.hpp"
#include "bff/math/roots.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace bff {

// Smallest standardized effect over which a BFF maximum is reported; chosen
// so a true null yields expected weight of evidence of at least 3.
inline double omega_min(double n_effective) {
    if (!(n_effective > 0.0)) throw std::domain_error("omega_min requires n > 0");
    return std::sqrt(6.0 / n_effective);
}

struct GridSpec {
    double lo = 0.01;
    double hi = 1.0;
    double step = 0.005;

    std::vector<double> points() const {
        if (!(lo > 0.0) || !(hi > lo) || !(step > 0.0))
            throw std::domain_error("grid requires 0 < lo < hi and step > 0");
        std::vector<double> out;
        const long n = std::lround((hi - lo) / step);
        out.reserve(n + 1);
        for (long i = 0; i <= n; ++i) {
            const double w = lo + i * step;
            if (w <= hi + 1e-12) out.push_back(std::min(w, hi));
        }
        return out;
    }
};

struct BFFPoint {
    double omega = 0.0;
    double log_bf10 = 0.0;
    bool ok = true;
};

struct ConstrainedMax {
    double omega = 0.0;
    double log_bf10 = 0.0;
};

struct BFFCurve {
    std::vector<BFFPoint> points;
    StatFamily family;
    TestRow row = TestRow::OneSampleZ;
    double statistic = 0.0;
    double nu = 9.0;
    SampleSpec sample;
    double n_eff = 0.0;
    double omega_min = 0.0;
    ConstrainedMax constrained_max;
    std::vector<std::string> notes;
};

enum class EvidenceLevel { Inconclusive, Positive, Strong, VeryStrong };

// |WOE| banded at 1 / 3 / 5 on the natural log scale; direction +1 favors
// the alternative, -1 the null.
struct EvidenceBand {
    EvidenceLevel level = EvidenceLevel::Inconclusive;
    int direction = 0;
};

inline EvidenceBand categorize(const WOE& woe) {
    const double a = std::abs(woe.log_bf10);
    EvidenceLevel level;
    if (a >= 5.0)
        level = EvidenceLevel::VeryStrong;
    else if (a >= 3.0)
        level = EvidenceLevel::Strong;
    else if (a >= 1.0)
        level = EvidenceLevel::Positive;
    else
        level = EvidenceLevel::Inconclusive;
    const int dir = woe.log_bf10 > 0.0 ? 1 : (woe.log_bf10 < 0.0 ? -1 : 0);
    return {level, dir};
}

inline std::string describe(const EvidenceBand& band) {
    std::string level;
    switch (band.level) {
        case EvidenceLevel::Inconclusive: return "inconclusive";
        case EvidenceLevel::Positive: level = "positive"; break;
        case EvidenceLevel::Strong: level = "strong"; break;
        case EvidenceLevel::VeryStrong: level = "very strong"; break;
    }
    return level + (band.direction >= 0 ? " evidence for alternative" : " evidence for null");
}

// Posterior probability of the null under equal prior odds.
inline double posterior_null_probability(const WOE& woe) {
    return 1.0 / (1.0 + std::exp(woe.log_bf10));
}

namespace detail {

// Grid argmax over omega >= omega_min (the threshold itself is always a
// candidate), refined by golden-section between the bracketing neighbors.
template <class WoeFn>
ConstrainedMax constrained_maximum(const WoeFn& woe_at, const std::vector<BFFPoint>& pts,
                                   double w_min, double grid_hi) {
    std::vector<std::pair<double, double>> cand;
    for (const auto& p : pts)
        if (p.ok && p.omega >= w_min) cand.push_back({p.omega, p.log_bf10});
    cand.insert(cand.begin(), {w_min, woe_at(w_min)});
    std::size_t best = 0;
    for (std::size_t i = 1; i < cand.size(); ++i)
        if (cand[i].second > cand[best].second) best = i;
    double lo = best == 0 ? w_min : cand[best - 1].first;
    double hi = best + 1 < cand.size() ? cand[best + 1].first : std::max(grid_hi, w_min);
    lo = std::max(lo, w_min);
    if (!(hi > lo)) return {cand[best].first, cand[best].second};
    auto [wm, fm] = roots::golden_max(woe_at, lo, hi, 1e-6);
    if (fm > cand[best].second) return {wm, fm};
    return {cand[best].first, cand[best].second};
}

} // namespace detail

// Evaluates a WOE(omega) function on the grid and attaches the constrained
// maximum over omega >= omega_min. Quadrature failures annotate the point and
// move on. Metadata fields beyond n_eff are the caller's to fill.
template <class WoeFn>
BFFCurve build_curve(const WoeFn& woe_at, double n_eff, const GridSpec& grid) {
    BFFCurve curve;
    curve.n_eff = n_eff;
    curve.omega_min = omega_min(n_eff);
    for (double w : grid.points()) {
        BFFPoint p;
        p.omega = w;
        try {
            p.log_bf10 = woe_at(w);
        } catch (const NumericError& e) {
            p.ok = false;
            p.log_bf10 = std::numeric_limits<double>::quiet_NaN();
            curve.notes.push_back("omega=" + std::to_string(w) + ": " + e.what());
        }
        curve.points.push_back(p);
    }
    curve.constrained_max = detail::constrained_maximum(woe_at, curve.points, curve.omega_min,
                                                        grid.hi);
    return curve;
}

// Builds the BFF for a statistic: at each grid omega the row's tau
// calibration defines the alternative prior and the engine supplies the
// Bayes factor.
inline BFFCurve build_bff(const TestStatistic& stat, double nu, const GridSpec& grid = {}) {
    stat.validate();
    auto woe_at = [&](double w) { return log_bf10_at_effect(stat, w, nu).log_bf10; };
    BFFCurve curve = build_curve(woe_at, n_effective(stat.row, stat.sample), grid);
    curve.family = stat.family;
    curve.row = stat.row;
    curve.statistic = stat.value;
    curve.nu = nu;
    curve.sample = stat.sample;
    return curve;
}

} // namespace bff
