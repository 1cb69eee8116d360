#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "disclosure/costs.hpp"
#include "disclosure/dist.hpp"
#include "disclosure/errors.hpp"

using namespace disclosure;

TEST_SUITE("costs") {

TEST_CASE("quadratic evaluations") {
    const CostSpec c = CostSpec::quadratic(0.5, 1.0);
    CHECK(c.cost_at(0.65) == doctest::Approx(0.0225).epsilon(1e-14));
    CHECK(c.cost_at(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(c.deriv_at(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(c.deriv_at(0.8) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(c.second_deriv_at(0.123) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("quadratic-quartic blend evaluations") {
    const CostSpec c = CostSpec::quad_quartic_blend(1.0, 2.0, 0.5, 1.0);
    // a*(x-mu)^2 + b*(x-mu)^4 at x=0.75: 0.0625 + 2*0.00390625
    CHECK(c.cost_at(0.75) == doctest::Approx(0.0703125).epsilon(1e-13));
    CHECK(c.deriv_at(0.75) ==
          doctest::Approx(2.0 * 0.25 + 8.0 * 0.015625).epsilon(1e-12));
    CHECK(c.cost_at(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("derivatives agree with central differences") {
    const CostSpec specs[] = {
        CostSpec::quadratic(0.5, 0.7),
        CostSpec::quad_quartic_blend(0.8, 1.3, 0.4, 2.0),
        CostSpec::polynomial({0.0, 0.0, 1.0, 0.25, 0.5}, 0.6, 1.0)};
    const double h = 1e-5;
    for (const CostSpec& c : specs) {
        for (double x : {0.1, 0.37, 0.62, 0.95}) {
            const double fd =
                (c.cost_at(x + h) - c.cost_at(x - h)) / (2.0 * h);
            const double fd2 =
                (c.cost_at(x + h) - 2.0 * c.cost_at(x) + c.cost_at(x - h)) /
                (h * h);
            CHECK(c.deriv_at(x) == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
            CHECK(c.second_deriv_at(x) ==
                  doctest::Approx(fd2).epsilon(1e-4).scale(1.0));
        }
    }
}

TEST_CASE("invalid shapes are rejected") {
    // concave
    CHECK_THROWS_AS(CostSpec::polynomial({0.0, 0.0, -1.0}, 0.5, 1.0),
                    InvalidCost);
    // nonzero at the anchor point
    CHECK_THROWS_AS(CostSpec::polynomial({0.01, 0.0, 1.0}, 0.5, 1.0),
                    InvalidCost);
    // zero curvature at the anchor (pure quartic is not strictly convex there)
    CHECK_THROWS_AS(CostSpec::polynomial({0.0, 0.0, 0.0, 0.0, 1.0}, 0.5, 1.0),
                    InvalidCost);
    CHECK_THROWS_AS(CostSpec::quadratic(0.5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(CostSpec::quadratic(1.2, 1.0), std::invalid_argument);
}

TEST_CASE("total cost of acquisition") {
    const Prior u = Prior::uniform();
    const CostSpec c = CostSpec::quadratic(0.5, 1.0);

    const PosteriorDist mp =
        PosteriorDist::from_atoms({{0.15, 0.3}, {0.65, 0.7}});
    // 0.3*(0.35)^2 + 0.7*(0.15)^2 = 0.03675 + 0.01575... with kappa=0.5
    const CostSpec half = c.with_kappa(0.5);
    CHECK(total_cost(half, mp) == doctest::Approx(0.02625).epsilon(1e-12));
    CHECK(total_cost(c, mp) == doctest::Approx(0.0525).epsilon(1e-12));

    CHECK(total_cost(c, PosteriorDist::degenerate(0.5)) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

    // full revelation of a uniform prior costs kappa * Var = 1/12
    const int n = 2001;
    std::vector<Atom> fine;
    for (int i = 0; i < n; ++i) fine.push_back({(i + 0.5) / n, 1.0 / n});
    const PosteriorDist full = PosteriorDist::from_atoms(fine);
    CHECK(total_cost(c, full) ==
          doctest::Approx(u.variance()).epsilon(1e-4));
}

TEST_CASE("pooling to the mean lowers quadratic cost") {
    const CostSpec c = CostSpec::quadratic(0.5, 2.0);
    const PosteriorDist spread =
        PosteriorDist::from_atoms({{0.1, 0.25}, {0.5, 0.5}, {0.9, 0.25}});
    const PosteriorDist pooled = PosteriorDist::degenerate(spread.mean());
    CHECK(total_cost(c, pooled) < total_cost(c, spread));
}

TEST_CASE("kappa rescaling") {
    const CostSpec c = CostSpec::quad_quartic_blend(1.0, 2.0, 0.5, 2.0);
    const CostSpec d = c.with_kappa(0.25);
    CHECK(d.kappa() == doctest::Approx(0.25));
    CHECK(d.cost_at(0.8) == doctest::Approx(c.cost_at(0.8)).epsilon(1e-14));
    const PosteriorDist g =
        PosteriorDist::from_atoms({{0.2, 0.5}, {0.8, 0.5}});
    CHECK(total_cost(d, g) ==
          doctest::Approx(total_cost(c, g) / 8.0).epsilon(1e-12));
}

}  // TEST_SUITE
