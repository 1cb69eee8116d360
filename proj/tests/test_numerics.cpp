#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "disclosure/numerics.hpp"
#include "test_support.hpp"

using namespace disclosure;

TEST_SUITE("numerics") {

TEST_CASE("adaptive quadrature matches closed forms") {
    const double cubic = num::adaptive_simpson(
        [](double x) { return x * x * x; }, 0.0, 1.0, 1e-12);
    CHECK(std::fabs(cubic - 0.25) < 1e-11);

    const double trig = num::adaptive_simpson(
        [](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(std::fabs(trig - 2.0) < 1e-10);

    // Sharp peak: forces deep refinement, cross-checked with the independent
    // fixed-step rule.
    auto peak = [](double x) { return 1.0 / (1e-4 + (x - 0.37) * (x - 0.37)); };
    const double adaptive = num::adaptive_simpson(peak, 0.0, 1.0, 1e-10);
    const double fixed = test_support::simpson(peak, 0.0, 1.0, 200000);
    CHECK(std::fabs(adaptive - fixed) < 1e-6 * std::fabs(fixed));
}

TEST_CASE("adaptive quadrature is additive over subintervals") {
    auto f = [](double x) { return std::exp(-3.0 * x) * std::cos(7.0 * x); };
    const double whole = num::adaptive_simpson(f, 0.0, 1.0, 1e-12);
    const double split = num::adaptive_simpson(f, 0.0, 0.31, 1e-12) +
                         num::adaptive_simpson(f, 0.31, 1.0, 1e-12);
    CHECK(std::fabs(whole - split) < 1e-10);
}

TEST_CASE("bisection finds bracketed roots to tolerance") {
    const double root = num::bisect([](double x) { return std::cos(x); }, 0.0,
                                    2.0, 1e-13);
    CHECK(std::fabs(root - M_PI / 2.0) < 1e-12);

    const double poly_root = num::bisect(
        [](double x) { return x * x * x - 0.2; }, 0.0, 1.0, 1e-13);
    CHECK(std::fabs(poly_root - std::cbrt(0.2)) < 1e-12);
}

TEST_CASE("bisection rejects unbracketed input") {
    CHECK_THROWS_AS(
        num::bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12),
        std::invalid_argument);
}

TEST_CASE("golden-section maximization") {
    const double at = num::golden_max(
        [](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-10);
    CHECK(std::fabs(at - 0.3) < 1e-8);

    // Boundary maximum: monotone objective pins the argmax at the edge.
    const double edge =
        num::golden_max([](double x) { return 2.0 * x; }, 0.0, 1.0, 1e-10);
    CHECK(std::fabs(edge - 1.0) < 1e-8);

    // Flat-top objective: any reported point must attain the max value.
    auto flat = [](double x) { return std::min(x, 0.5); };
    const double f_at = num::golden_max(flat, 0.0, 1.0, 1e-10);
    CHECK(flat(f_at) > 0.5 - 1e-8);
}

}  // TEST_SUITE
