#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "disclosure/costs.hpp"
#include "disclosure/dist.hpp"
#include "disclosure/errors.hpp"
#include "disclosure/persuasion.hpp"

using namespace disclosure;

namespace {

ValueConfig uniform_quad_cfg(double alpha, double gamma, double kappa) {
    return ValueConfig(alpha, gamma, CostSpec::quadratic(0.5, kappa));
}

}  // namespace

TEST_SUITE("persuasion") {

TEST_CASE("kinked sender value") {
    const ValueConfig cfg = uniform_quad_cfg(0.15, 0.2, 0.5);
    CHECK(cfg.kink() == doctest::Approx(0.35).epsilon(1e-15));
    // uncertified branch: alpha - kappa c(x)
    CHECK(value_at(cfg, 0.1) == doctest::Approx(0.07).epsilon(1e-13));
    // certified branch: x - gamma - kappa c(x)
    CHECK(value_at(cfg, 0.65) == doctest::Approx(0.43875).epsilon(1e-13));
    // the kink itself is certified and both branches agree there
    CHECK(value_at(cfg, 0.35) == doctest::Approx(0.13875).epsilon(1e-13));
    CHECK(value_at(cfg, 0.35) ==
          doctest::Approx(0.35 - 0.2 - 0.5 * 0.0225).epsilon(1e-13));

    CHECK(value_deriv_at(cfg, 0.1) ==
          doctest::Approx(-0.5 * 2.0 * (0.1 - 0.5)).epsilon(1e-12));
    CHECK(value_deriv_at(cfg, 0.65) ==
          doctest::Approx(1.0 - 0.5 * 2.0 * 0.15).epsilon(1e-12));

    CHECK_THROWS_AS(ValueConfig(0.2, -0.1, CostSpec::quadratic(0.5, 0.5)),
                    std::invalid_argument);
}

TEST_CASE("monotone partitional optimum at the headline parameters") {
    const Prior u = Prior::uniform();
    const InnerSolution sol = solve_inner(u, uniform_quad_cfg(0.15, 0.2, 0.5));
    REQUIRE(sol.kind == InnerKind::MonotonePartitional);
    REQUIRE(sol.g.support_size(1e-9) == 2);
    const auto& a = sol.g.atoms();
    CHECK(a[0].x == doctest::Approx(0.15).epsilon(1e-7));
    CHECK(a[0].w == doctest::Approx(0.3).epsilon(1e-7));
    CHECK(a[1].x == doctest::Approx(0.65).epsilon(1e-7));
    CHECK(a[1].w == doctest::Approx(0.7).epsilon(1e-7));
    // value = 0.3*V(0.15) + 0.7*V(0.65) with V(0.15)=0.15-0.5*0.1225
    CHECK(sol.value == doctest::Approx(0.33375).epsilon(1e-9));
    CHECK(sol.certificate.shape == CertShape::Kinked);
    CHECK(mpc_feasible(sol.g, u).feasible);

    const CertificateCheck chk =
        verify_certificate(u, uniform_quad_cfg(0.15, 0.2, 0.5), sol.g,
                           sol.certificate, sol.value);
    CHECK(chk.ok);
    CHECK(chk.duality_gap <= 1e-6);
}

TEST_CASE("degenerate optimum under expensive evidence") {
    const Prior u = Prior::uniform();
    const InnerSolution sol = solve_inner(u, uniform_quad_cfg(0.5, 0.2, 3.0));
    CHECK(sol.kind == InnerKind::Degenerate);
    CHECK(sol.g.is_degenerate());
    CHECK(sol.g.mean() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(sol.certificate.shape == CertShape::Degenerate);
    CHECK(lower_support(sol.g) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("bi-pooling optimum with both atoms strictly interior") {
    const Prior u = Prior::uniform();
    const ValueConfig cfg = uniform_quad_cfg(0.3, 0.125, 2.0);
    const InnerSolution sol = solve_inner(u, cfg);
    REQUIRE(sol.kind == InnerKind::BiPooling);
    const auto& a = sol.g.atoms();
    REQUIRE(a.size() == 2);
    CHECK(a[0].x == doctest::Approx(0.3).epsilon(1e-7));
    CHECK(a[0].w == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(a[1].x == doctest::Approx(0.55).epsilon(1e-7));
    CHECK(a[1].w == doctest::Approx(0.8).epsilon(1e-6));
    // tangency slopes coincide: affine certificate
    CHECK(sol.certificate.shape == CertShape::Affine);
    // first-order conditions of the two-atom problem
    const double xl = a[0].x, xh = a[1].x;
    CHECK(2.0 * (cfg.cost.deriv_at(xh) - cfg.cost.deriv_at(xl)) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(binary_mpc_slack(u, xl, xh, a[0].w) >= -1e-9);
}

TEST_CASE("structural solver matches the LP oracle") {
    const Prior u = Prior::uniform();

    const LpInnerSolution lp =
        solve_inner_lp(u, uniform_quad_cfg(0.15, 0.2, 0.5), 2001);
    CHECK(lp.value >= 0.33175);
    CHECK(lp.value <= 0.33575);

    // free full disclosure: value = E[theta] - 0 with alpha=0, gamma=0
    const LpInnerSolution full =
        solve_inner_lp(u, uniform_quad_cfg(0.0, 0.0, 0.5), 501);
    const InnerSolution full_structural =
        solve_inner(u, uniform_quad_cfg(0.0, 0.0, 0.5));
    CHECK(full.value == doctest::Approx(full_structural.value).epsilon(5e-3));

    // a small bank of parameter points across candidate classes
    struct Case { double alpha, gamma, kappa; };
    const Case cases[] = {{0.15, 0.2, 0.5}, {0.5, 0.2, 3.0},  {0.3, 0.125, 2.0},
                          {0.1, 0.05, 1.0}, {0.45, 0.3, 0.8}, {0.25, 0.0, 0.6}};
    for (const Case& cs : cases) {
        const ValueConfig cfg = uniform_quad_cfg(cs.alpha, cs.gamma, cs.kappa);
        const InnerSolution st = solve_inner(u, cfg);
        const LpInnerSolution lp501 = solve_inner_lp(u, cfg, 501);
        CHECK(std::fabs(st.value - lp501.value) <= 5e-3);
        CHECK(st.value >= lp501.value - 5e-4);  // LP grid can only undershoot
    }

    // non-uniform prior too
    const Prior b = Prior::beta(2.0, 2.0);
    const ValueConfig cfg_b(0.2, 0.15, CostSpec::quadratic(0.5, 0.7));
    const InnerSolution st_b = solve_inner(b, cfg_b);
    const LpInnerSolution lp_b = solve_inner_lp(b, cfg_b, 501);
    CHECK(std::fabs(st_b.value - lp_b.value) <= 5e-3);
    CHECK(mpc_feasible(st_b.g, b).feasible);
}

TEST_CASE("certificates price every returned solution") {
    const Prior priors[] = {Prior::uniform(), Prior::beta(2.0, 2.0)};
    struct Case { double alpha, gamma, kappa; };
    const Case cases[] = {{0.15, 0.2, 0.5}, {0.5, 0.2, 3.0}, {0.3, 0.125, 2.0},
                          {0.05, 0.4, 1.5}, {0.4, 0.1, 0.3}};
    for (const Prior& p : priors) {
        for (const Case& cs : cases) {
            const double alpha = std::min(cs.alpha, p.mean());
            const ValueConfig cfg(alpha, cs.gamma,
                                  CostSpec::quadratic(p.mean(), cs.kappa));
            const InnerSolution sol = solve_inner(p, cfg);
            const CertificateCheck chk =
                verify_certificate(p, cfg, sol.g, sol.certificate, sol.value);
            CHECK(chk.ok);
            CHECK(chk.worst_majorization <= 1e-7);
            CHECK(chk.worst_support_gap <= 1e-7);
            CHECK(chk.duality_gap <= 1e-6);
        }
    }
}

TEST_CASE("value of the optimum is monotone in the null-message belief") {
    const Prior u = Prior::uniform();
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
        const double alpha = 0.5 * i / 20.0;
        const InnerSolution sol = solve_inner(u, uniform_quad_cfg(alpha, 0.2, 0.5));
        CHECK(sol.value >= prev - 1e-12);
        prev = sol.value;
    }
}

TEST_CASE("near ties are reported at a candidate-class boundary") {
    // Bisect the switch between degenerate and binary responses in alpha.
    const Prior u = Prior::uniform();
    auto is_binary = [&](double alpha) {
        const ValueConfig cfg = uniform_quad_cfg(alpha, 0.05, 2.0);
        return solve_inner_core(u, cfg).best().kind != InnerKind::Degenerate;
    };
    double lo = 0.0, hi = 0.5;
    REQUIRE_FALSE(is_binary(lo));
    REQUIRE(is_binary(hi));
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (is_binary(mid) ? hi : lo) = mid;
    }
    const InnerSolution sol = solve_inner(u, uniform_quad_cfg(lo, 0.05, 2.0));
    REQUIRE(sol.near_tie.has_value());
    CHECK(sol.near_tie->kind != sol.kind);
    CHECK(std::fabs(sol.near_tie->value - sol.value) <= 1e-8);
}

TEST_CASE("input validation") {
    const Prior u = Prior::uniform();
    CHECK_THROWS_AS(
        solve_inner(u, ValueConfig(0.2, 0.1, CostSpec::quadratic(0.5, 0.0))),
        std::invalid_argument);
    // cost anchored away from the prior mean
    CHECK_THROWS_AS(
        solve_inner(u, ValueConfig(0.2, 0.1, CostSpec::quadratic(0.4, 1.0))),
        std::invalid_argument);
    CHECK_THROWS_AS(solve_inner_lp(u, uniform_quad_cfg(0.2, 0.1, 0.5), 11),
                    std::invalid_argument);
}

TEST_CASE("lower support endpoint") {
    CHECK(lower_support(PosteriorDist::degenerate(0.4)) ==
          doctest::Approx(0.4));
    CHECK(lower_support(PosteriorDist::from_atoms({{0.2, 0.5}, {0.8, 0.5}})) ==
          doctest::Approx(0.2));
}

}  // TEST_SUITE
