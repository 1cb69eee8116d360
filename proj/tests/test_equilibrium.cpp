#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "disclosure/equilibrium.hpp"
#include "disclosure/errors.hpp"

using namespace disclosure;

namespace {

CostSpec uq(double kappa) { return CostSpec::quadratic(0.5, kappa); }

const Equilibrium* find_kind(const EquilibriumSet& s, EqKind k) {
    for (const Equilibrium& e : s.equilibria)
        if (e.kind == k) return &e;
    return nullptr;
}

}  // namespace

TEST_SUITE("equilibrium") {

TEST_CASE("no-learning profile tests under uniform quadratic") {
    const Prior u = Prior::uniform();
    // never-certify survives iff gamma >= 1/(4 kappa)
    CHECK(check_no_learn_no_cert(u, uq(2.0), 0.125).holds);
    CHECK(check_no_learn_no_cert(u, uq(2.0), 0.2).holds);
    CHECK_FALSE(check_no_learn_no_cert(u, uq(2.0), 0.1).holds);
    CHECK_FALSE(check_no_learn_no_cert(u, uq(0.5), 0.2).holds);
    CHECK(check_no_learn_no_cert(u, uq(0.5), 0.4).holds);

    // always-certify survives iff gamma <= 1/2 - 1/(4 kappa) (kappa >= 1)
    CHECK(check_no_learn_cert(u, uq(2.0), 0.3).holds);
    CHECK_FALSE(check_no_learn_cert(u, uq(2.0), 0.4).holds);
    // ... and iff gamma <= kappa/4 when kappa <= 1
    CHECK(check_no_learn_cert(u, uq(0.5), 0.1).holds);
    CHECK_FALSE(check_no_learn_cert(u, uq(0.5), 0.2).holds);

    // a free certificate: certifying is costless, never-certify cannot hold
    CHECK(check_no_learn_cert(u, uq(0.5), 0.0).holds);
    CHECK_FALSE(check_no_learn_no_cert(u, uq(0.5), 0.0).holds);
}

TEST_CASE("fallback-belief response map") {
    const Prior u = Prior::uniform();
    // interior learning response: L(0.15) = 0.15 at the headline parameters
    CHECK(best_response_belief(u, uq(0.5), 0.2, 0.15) ==
          doctest::Approx(0.15).epsilon(1e-6));
    // expensive evidence: response degenerate at the mean
    CHECK(best_response_belief(u, uq(3.0), 0.2, 0.5) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // response varies continuously in alpha on a binary stretch
    double prev = best_response_belief(u, uq(0.5), 0.2, 0.10);
    for (int i = 1; i <= 20; ++i) {
        const double a = 0.10 + 0.10 * i / 20.0;
        const double cur = best_response_belief(u, uq(0.5), 0.2, a);
        CHECK(std::fabs(cur - prev) <= 0.05);
        prev = cur;
    }
}

TEST_CASE("covert equilibria at the headline parameters") {
    const Prior u = Prior::uniform();
    const EquilibriumSet s = covert_equilibria(u, uq(0.5), 0.2);
    CHECK_FALSE(s.family.has_value());

    const Equilibrium* mp = find_kind(s, EqKind::MonotonePartitional);
    REQUIRE(mp != nullptr);
    CHECK(mp->alpha == doctest::Approx(0.15).epsilon(1e-6));
    REQUIRE(mp->g.support_size(1e-9) == 2);
    CHECK(mp->g.atoms()[0].x == doctest::Approx(0.15).epsilon(1e-6));
    CHECK(mp->g.atoms()[0].w == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(mp->g.atoms()[1].x == doctest::Approx(0.65).epsilon(1e-6));
    CHECK(mp->g.atoms()[1].w == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(std::fabs(mp->g.atoms()[0].x - mp->alpha) <= 1e-6);
    CHECK(mp->residual <= 1e-8);
    CHECK(mp->cert_threshold == doctest::Approx(0.35).epsilon(1e-6));
    CHECK(mp->cert_probability == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(mp->sender_payoff == doctest::Approx(0.33375).epsilon(1e-7));
    CHECK(mp->receiver_payoff == doctest::Approx(-0.0308333333).epsilon(1e-6));
}

TEST_CASE("expensive evidence leaves only no-learning equilibria") {
    const Prior u = Prior::uniform();
    const EquilibriumSet s = covert_equilibria(u, uq(3.0), 0.2);
    REQUIRE(s.equilibria.size() == 2);
    CHECK_FALSE(s.family.has_value());

    const Equilibrium* nlc = find_kind(s, EqKind::NoLearnCert);
    REQUIRE(nlc != nullptr);
    CHECK(nlc->alpha == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(nlc->cert_probability == doctest::Approx(1.0));
    CHECK(nlc->sender_payoff == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(nlc->g.is_degenerate());
    CHECK(nlc->g.mean() == doctest::Approx(0.5));

    const Equilibrium* nlnc = find_kind(s, EqKind::NoLearnNoCert);
    REQUIRE(nlnc != nullptr);
    CHECK(nlnc->alpha == doctest::Approx(0.5));
    CHECK(nlnc->cert_probability == doctest::Approx(0.0).scale(1.0));
    CHECK(nlnc->sender_payoff == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nlnc->receiver_payoff ==
          doctest::Approx(-1.0 / 12.0).epsilon(1e-9));
}

TEST_CASE("free certification forces full certification") {
    const Prior u = Prior::uniform();
    const EquilibriumSet s = covert_equilibria(u, uq(0.5), 0.0);
    REQUIRE(s.equilibria.size() == 1);
    CHECK(s.equilibria[0].kind == EqKind::NoLearnCert);
    CHECK(s.equilibria[0].sender_payoff == doctest::Approx(0.5));
    CHECK_FALSE(s.family.has_value());
}

TEST_CASE("fixed points are reproduced by the response map") {
    const Prior priors[] = {Prior::uniform(), Prior::beta(2.0, 2.0)};
    const double kappas[] = {0.5, 2.0};
    const double gammas[] = {0.1, 0.2};
    for (const Prior& p : priors) {
        for (double k : kappas) {
            for (double gm : gammas) {
                const CostSpec c = CostSpec::quadratic(p.mean(), k);
                const EquilibriumSet s = covert_equilibria(p, c, gm);
                REQUIRE_FALSE(s.equilibria.empty());
                for (const Equilibrium& e : s.equilibria) {
                    if (e.kind == EqKind::MonotonePartitional ||
                        e.kind == EqKind::BiPooling) {
                        if (e.at_boundary) continue;
                        const double back =
                            best_response_belief(p, c, gm, e.alpha);
                        CHECK(std::fabs(back - e.alpha) <= 1e-6);
                    }
                }
            }
        }
    }
}

TEST_CASE("knife-edge fee yields a continuum of binary equilibria") {
    const Prior u = Prior::uniform();
    const EquilibriumSet s = covert_equilibria(u, uq(2.0), 0.125);
    REQUIRE(s.family.has_value());
    const BiPoolingFamily& f = *s.family;
    CHECK(f.alpha_lo == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(f.alpha_hi == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(f.support_gap == doctest::Approx(0.25).epsilon(1e-6));
    REQUIRE(f.samples.size() >= 3);
    for (const Equilibrium& e : f.samples) {
        CHECK(e.kind == EqKind::BiPooling);
        CHECK(e.alpha >= f.alpha_lo - 1e-9);
        CHECK(e.alpha <= f.alpha_hi + 1e-9);
        REQUIRE(e.g.support_size(1e-9) == 2);
        CHECK(e.g.atoms()[1].x - e.g.atoms()[0].x ==
              doctest::Approx(0.25).epsilon(1e-6));
        CHECK(e.residual <= 1e-6);
    }
    // off the knife edge the continuum collapses
    CHECK_FALSE(covert_equilibria(u, uq(2.0), 0.115).family.has_value());
    CHECK_FALSE(covert_equilibria(u, uq(2.0), 0.135).family.has_value());
}

TEST_CASE("cheap evidence keeps learning alive; dear evidence kills it") {
    const Prior u = Prior::uniform();
    const EquilibriumSet cheap = covert_equilibria(u, uq(0.05), 0.02);
    const bool has_learning =
        find_kind(cheap, EqKind::MonotonePartitional) != nullptr ||
        find_kind(cheap, EqKind::BiPooling) != nullptr;
    CHECK(has_learning);

    const EquilibriumSet dear = covert_equilibria(u, uq(50.0), 0.2);
    CHECK(find_kind(dear, EqKind::MonotonePartitional) == nullptr);
    CHECK(find_kind(dear, EqKind::BiPooling) == nullptr);
    CHECK_FALSE(dear.equilibria.empty());

    CHECK_THROWS_AS(covert_equilibria(u, uq(0.0), 0.2), std::invalid_argument);
}

TEST_CASE("observable acquisition destroys the value of information") {
    for (const Prior& p : {Prior::uniform(), Prior::beta(2.0, 2.0)}) {
        const CostSpec c = CostSpec::quadratic(p.mean(), 0.5);
        const Equilibrium e = overt_equilibrium(p, c, 0.2);
        CHECK(e.kind == EqKind::NoLearnNoCert);
        CHECK(std::fabs(e.sender_payoff - p.mean()) <= 1e-12);
        CHECK(e.cert_probability == doctest::Approx(0.0).scale(1.0));
        CHECK(e.g.is_degenerate());
        CHECK(e.receiver_payoff == doctest::Approx(-p.variance()).epsilon(1e-9));
    }
}

TEST_CASE("free-evidence benchmark under the uniform prior") {
    const Kappa0Benchmark b = benchmark_kappa0(Prior::uniform(), 0.2);
    CHECK_FALSE(b.no_certification);
    CHECK(b.x_star == doctest::Approx(0.4).epsilon(1e-8));
    CHECK(b.alpha == doctest::Approx(0.2).epsilon(1e-8));
    REQUIRE(b.worst_g.support_size(1e-9) == 2);
    CHECK(b.worst_g.atoms()[0].x == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(b.worst_g.atoms()[0].w == doctest::Approx(0.4).epsilon(1e-8));
    CHECK(b.worst_g.atoms()[1].x == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(b.worst_g.atoms()[1].w == doctest::Approx(0.6).epsilon(1e-8));
    CHECK(b.sender_payoff == doctest::Approx(0.38).epsilon(1e-8));
    CHECK(b.receiver_payoff_worst == doctest::Approx(-0.0233333333).epsilon(1e-6));
    CHECK(b.receiver_payoff_best == doctest::Approx(-0.00533333333).epsilon(1e-6));
    CHECK(b.receiver_payoff_best > b.receiver_payoff_worst);
}

TEST_CASE("free-evidence benchmark pins the cutoff by the wedge equation") {
    const Prior b = Prior::beta(2.0, 2.0);
    const Kappa0Benchmark bench = benchmark_kappa0(b, 0.15);
    CHECK_FALSE(bench.no_certification);
    CHECK(std::fabs(xi(b, bench.x_star) - 0.15) <= 1e-8);
    CHECK(bench.alpha == doctest::Approx(bench.x_star - 0.15).epsilon(1e-10));

    // fee above the largest certification surplus: nobody certifies
    const Kappa0Benchmark none = benchmark_kappa0(Prior::uniform(), 0.55);
    CHECK(none.no_certification);
    CHECK(none.alpha == doctest::Approx(0.5));
    CHECK(none.worst_g.is_degenerate());
    CHECK(none.sender_payoff == doctest::Approx(0.5));
}

TEST_CASE("vanishing-cost limit approaches the free-evidence outcome") {
    const Prior u = Prior::uniform();
    const KappaLimitReport rep =
        kappa_limit(u, uq(1.0), 0.2, {0.2, 0.1, 0.05, 0.02, 0.01});
    REQUIRE(rep.rows.size() == 5);
    CHECK(rep.distances_decreasing);
    CHECK(rep.benchmark.x_star == doctest::Approx(0.4).epsilon(1e-8));
    const KappaLimitRow& r01 = rep.rows[1];
    CHECK(r01.kappa == doctest::Approx(0.1));
    REQUIRE(r01.has_learning);
    CHECK(r01.alpha == doctest::Approx(0.194444444).epsilon(1e-6));
    const KappaLimitRow& r001 = rep.rows[4];
    REQUIRE(r001.has_learning);
    CHECK(r001.alpha == doctest::Approx(0.199494948).epsilon(1e-6));
    CHECK(r001.distance <= 0.012);

    CHECK_THROWS_AS(kappa_limit(u, uq(1.0), 0.2, {0.1, 0.2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(kappa_limit(u, uq(1.0), 0.7, {0.1, 0.05}),
                    std::invalid_argument);
}

TEST_CASE("parameter-region labels for the uniform-quadratic family") {
    const Prior u = Prior::uniform();
    const CostSpec tmpl = uq(1.0);
    CHECK(region_classify(u, tmpl, 0.5, 0.05).region == Region::B);
    CHECK(region_classify(u, tmpl, 0.5, 0.45).region == Region::A);
    CHECK(region_classify(u, tmpl, 3.0, 0.2).region == Region::C);
    CHECK(region_classify(u, tmpl, 0.5, 0.2).region == Region::D);
    CHECK(region_classify(u, tmpl, 0.5, 0.2).n_equilibria >= 1);

    const std::vector<double> ks = {0.5, 1.5, 3.0};
    const std::vector<double> gs = {0.05, 0.2, 0.45};
    const std::vector<RegionCell> map = region_map(u, tmpl, ks, gs);
    REQUIRE(map.size() == 9);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        for (std::size_t j = 0; j < gs.size(); ++j) {
            const RegionCell& cell = map[i * gs.size() + j];
            CHECK(cell.kappa == doctest::Approx(ks[i]));
            CHECK(cell.gamma == doctest::Approx(gs[j]));
            CHECK(cell.region ==
                  region_classify(u, tmpl, ks[i], gs[j]).region);
        }
    }
}

TEST_CASE("closed-form learning equilibrium across the interior region") {
    const Prior u = Prior::uniform();
    // alpha* = (kappa - 4 gamma) / (4 (kappa - 1)), atoms alpha and alpha + 1/2
    const double kappa = 0.5, gamma = 0.3;
    const EquilibriumSet s = covert_equilibria(u, uq(kappa), gamma);
    const Equilibrium* mp = find_kind(s, EqKind::MonotonePartitional);
    REQUIRE(mp != nullptr);
    const double expect = (kappa - 4.0 * gamma) / (4.0 * (kappa - 1.0));
    CHECK(mp->alpha == doctest::Approx(expect).epsilon(1e-6));
    CHECK(mp->g.atoms()[0].x == doctest::Approx(expect).epsilon(1e-6));
    CHECK(mp->g.atoms()[1].x == doctest::Approx(expect + 0.5).epsilon(1e-6));
}

}  // TEST_SUITE
