#include "bff/math/quadrature.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace bff;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("GK15 integrates monomials exactly", "[quadrature]") {
    // A single 15-point panel is exact for polynomials up to degree 22.
    for (int k = 0; k <= 13; ++k) {
        const auto r = quad::integrate([k](double x) { return std::pow(x, k); }, 0.0, 1.0);
        REQUIRE_THAT(r.value, WithinAbs(1.0 / (k + 1), 1e-14));
    }
}

TEST_CASE("standard normal density integrates to one over the real line", "[quadrature]") {
    auto phi = [](double x) {
        return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    };
    const auto r = quad::integrate_with_tails(phi, {-2.0, 0.0, 2.0}, false);
    REQUIRE_THAT(r.value, WithinAbs(1.0, 1e-10));
}

TEST_CASE("upper tail transform handles exponential decay", "[quadrature]") {
    const auto r = quad::integrate_upper_tail([](double x) { return std::exp(-x); }, 0.0);
    REQUIRE_THAT(r.value, WithinRel(1.0, 1e-10));
}

TEST_CASE("tail transform keeps Cauchy tails integrable", "[quadrature]") {
    auto cauchy = [](double x) { return 1.0 / (std::numbers::pi * (1.0 + x * x)); };
    const auto r = quad::integrate_with_tails(cauchy, {-1.0, 0.0, 1.0}, false);
    REQUIRE_THAT(r.value, WithinAbs(1.0, 1e-9));
}

TEST_CASE("oscillatory integrand converges with refinement", "[quadrature]") {
    const auto r = quad::integrate([](double x) { return std::sin(20.0 * x); }, 0.0, 1.0);
    REQUIRE_THAT(r.value, WithinAbs((1.0 - std::cos(20.0)) / 20.0, 1e-12));
}

TEST_CASE("non-convergence raises a numeric error with diagnostics", "[quadrature]") {
    quad::Options opt;
    opt.max_intervals = 4;
    opt.rel_tol = 1e-14;
    auto nasty = [](double x) { return std::sqrt(std::abs(x - 0.123456)); };
    REQUIRE_THROWS_AS(quad::integrate(nasty, 0.0, 1.0, opt), NumericError);
    try {
        quad::integrate(nasty, 0.0, 1.0, opt);
    } catch (const NumericError& e) {
        REQUIRE(std::string(e.what()).find("did not converge") != std::string::npos);
    }
}

TEST_CASE("segment breakpoints must be increasing", "[quadrature]") {
    auto f = [](double) { return 1.0; };
    REQUIRE_THROWS_AS(quad::integrate_segments(f, {1.0, 0.0}, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(quad::integrate_segments(f, {1.0}, {}), std::invalid_argument);
}
