#include "disclosure/checks.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "disclosure/equilibrium.hpp"
#include "disclosure/errors.hpp"
#include "disclosure/io.hpp"
#include "disclosure/numerics.hpp"
#include "disclosure/welfare.hpp"

namespace disclosure::checks {

namespace {

struct Suite {
    std::vector<CheckResult> results;
    int fail_count = 0;

    void add(const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
        if (!pass) ++fail_count;
    }
};

std::string fmt(double v) { return io::format_sig(v); }

const Prior& pick_prior(std::mt19937_64& rng) {
    static const Prior uniform = Prior::uniform();
    static const Prior beta22 = Prior::beta(2.0, 2.0);
    return (rng() & 1u) ? beta22 : uniform;
}

void check_distribution_shape(Suite& s) {
    const Prior priors[] = {Prior::uniform(), Prior::beta(2.0, 2.0),
                            Prior::beta(2.0, 5.0)};
    bool xi_ok = true, rs_ok = true;
    double worst = 0.0;
    for (const Prior& p : priors) {
        double prev_xi = -1.0, prev_rs = 0.0, prev_slope = -1.0;
        for (int i = 1; i <= 200; ++i) {
            const double x = i / 201.0;
            const double v = xi(p, x);
            if (v < prev_xi - 1e-12) xi_ok = false;
            prev_xi = v;
            const double rs = p.rs_integral(x);
            const double slope = (rs - prev_rs) * 201.0;
            if (slope < prev_slope - 1e-9) {
                rs_ok = false;
                worst = std::min(worst, slope - prev_slope);
            }
            prev_slope = slope;
            prev_rs = rs;
        }
    }
    s.add("xi_monotone", xi_ok, "truncation wedge increases in the cutoff");
    s.add("rs_integral_convex", rs_ok,
          rs_ok ? "integrated cdf has increasing slopes"
                : "convexity defect " + fmt(worst));
}

void check_mpc_oracle(Suite& s, std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int agree = 0, tested = 0;
    std::string note;
    for (int i = 0; i < n; ++i) {
        const Prior& prior = pick_prior(rng);
        const double mu = prior.mean();
        double lo = u01(rng) * mu;
        double hi = mu + u01(rng) * (1.0 - mu);
        if (hi - lo < 1e-3) continue;
        const double w = (hi - mu) / (hi - lo);
        const double slack = binary_mpc_slack(prior, lo, hi, w);
        if (std::fabs(slack) < 1e-7) continue;  // verdict genuinely ambiguous
        const PosteriorDist g =
            PosteriorDist::from_atoms({{lo, w}, {hi, 1.0 - w}});
        const MpcReport rep = mpc_feasible(g, prior, 1e-9);
        ++tested;
        if (rep.feasible == (slack >= 0.0)) {
            ++agree;
        } else if (note.empty()) {
            note = "disagreement at lo=" + fmt(lo) + " hi=" + fmt(hi) +
                   " slack=" + fmt(slack);
        }
    }
    s.add("mpc_grid_vs_exact", agree == tested,
          note.empty() ? "verdicts agree on " + std::to_string(tested) +
                             " binary contractions"
                       : note);
}

void check_inner_oracle(Suite& s, std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int value_ok = 0, feasible_ok = 0, cert_ok = 0, tested = 0;
    std::string note;
    for (int i = 0; i < n; ++i) {
        const Prior& prior = pick_prior(rng);
        const double mu = prior.mean();
        const double kappa = std::exp(std::log(0.05) +
                                      u01(rng) * std::log(5.0 / 0.05));
        const double gamma = 0.5 * u01(rng);
        const double alpha = mu * u01(rng);
        const CostSpec cost = CostSpec::quadratic(mu, kappa);
        const ValueConfig cfg(alpha, gamma, cost);
        ++tested;
        try {
            const InnerSolution sol = solve_inner(prior, cfg);
            const LpInnerSolution lp = solve_inner_lp(prior, cfg, 501);
            const double gap = sol.value - lp.value;
            if (std::fabs(gap) <= 5e-3) {
                ++value_ok;
            } else if (note.empty()) {
                note = "value gap " + fmt(gap) + " at kappa=" + fmt(kappa) +
                       " gamma=" + fmt(gamma) + " alpha=" + fmt(alpha);
            }
            if (mpc_feasible(sol.g, prior, 1e-9).feasible) ++feasible_ok;
            const CertificateCheck chk = verify_certificate(
                prior, cfg, sol.g, sol.certificate, sol.value);
            if (chk.ok) ++cert_ok;
        } catch (const SolverError& e) {
            if (note.empty()) note = e.what();
        }
    }
    const std::string base = std::to_string(tested) + " random problems";
    s.add("structural_vs_lp_value", value_ok == tested,
          note.empty() ? base : note);
    s.add("solution_mpc_feasible", feasible_ok == tested, base);
    s.add("certificate_valid", cert_ok == tested, base);
}

void check_response_continuity(Suite& s, std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int tested = 0;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const Prior& prior = pick_prior(rng);
        const double mu = prior.mean();
        const double kappa = 0.1 + 0.9 * u01(rng);
        const double gamma = 0.05 + 0.3 * u01(rng);
        const CostSpec cost = CostSpec::quadratic(mu, kappa);
        const double alpha = u01(rng) * (mu - 1e-3);
        const double h = 1e-3;
        const ResponseCore a =
            solve_inner_core(prior, ValueConfig(alpha, gamma, cost));
        const ResponseCore b =
            solve_inner_core(prior, ValueConfig(alpha + h, gamma, cost));
        if (a.best().kind == InnerKind::Degenerate ||
            b.best().kind == InnerKind::Degenerate)
            continue;
        ++tested;
        worst = std::max(worst,
                         std::fabs(b.best().x_lo - a.best().x_lo));
    }
    s.add("lower_support_continuity", worst <= 0.05,
          "worst |dL| " + fmt(worst) + " across " + std::to_string(tested) +
              " binary pairs");
}

void check_equilibrium_existence(Suite& s) {
    const Prior priors[] = {Prior::uniform(), Prior::beta(2.0, 2.0)};
    int cells = 0, nonempty = 0, residual_ok = 0;
    std::string note;
    for (const Prior& prior : priors) {
        const CostSpec cost = CostSpec::quadratic(prior.mean(), 1.0);
        for (int i = 1; i <= 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                const double kappa = i;
                const double gamma = 0.55 * j / 4.0;
                ++cells;
                try {
                    const EquilibriumSet set =
                        covert_equilibria(prior, cost.with_kappa(kappa), gamma);
                    ++nonempty;
                    bool ok = true;
                    for (const Equilibrium& eq : set.equilibria)
                        if (eq.residual > 1e-6) ok = false;
                    if (ok) ++residual_ok;
                } catch (const SolverError& e) {
                    if (note.empty()) note = e.what();
                }
            }
        }
    }
    s.add("equilibrium_exists", nonempty == cells,
          note.empty() ? std::to_string(cells) + " lattice cells" : note);
    s.add("fixed_point_residuals", residual_ok == cells,
          "residual <= 1e-6 on every reported equilibrium");
}

void check_welfare_identities(Suite& s) {
    const Prior prior = Prior::uniform();
    const CostSpec cost = CostSpec::quadratic(prior.mean(), 0.5);
    const EquilibriumSet set = covert_equilibria(prior, cost, 0.2);
    bool decomposition_ok = true, ltv_ok = true;
    double worst = 0.0;
    for (const Equilibrium& eq : set.equilibria) {
        const WelfareReport rep = sender_payoff(prior, cost, 0.2, eq);
        decomposition_ok = decomposition_ok && rep.slack <= 1e-9;
        if (eq.kind != EqKind::MonotonePartitional) continue;
        // Law of total variance across the truncation cells; the cut point
        // is the state whose cdf equals the lower atom's weight.
        const double t = prior.quantile(eq.g.atoms().front().w);
        auto seg_var = [&](double lo, double hi, double w) {
            if (w < 1e-12) return 0.0;
            const double m1 = num::adaptive_simpson(
                                  [&](double x) { return x * prior.density(x); },
                                  lo, hi, 1e-12) /
                              w;
            const double m2 = num::adaptive_simpson(
                                  [&](double x) {
                                      return x * x * prior.density(x);
                                  },
                                  lo, hi, 1e-12) /
                              w;
            return w * (m2 - m1 * m1);
        };
        const double within = seg_var(0.0, t, prior.cdf(t)) +
                              seg_var(t, 1.0, 1.0 - prior.cdf(t));
        const double defect =
            std::fabs(prior.variance() - (eq.g.variance() + within));
        worst = std::max(worst, defect);
        if (defect > 1e-8) ltv_ok = false;
    }
    s.add("sender_decomposition", decomposition_ok,
          "gross - fee - acquisition matches the kinked value");
    s.add("law_of_total_variance", ltv_ok, "worst defect " + fmt(worst));

    // Coarsening a binary outcome to its mean can only hurt the receiver.
    bool coarsen_ok = true;
    for (const Equilibrium& eq : set.equilibria) {
        Equilibrium pooled = eq;
        pooled.g = PosteriorDist::degenerate(eq.g.mean());
        if (receiver_payoff(prior, pooled) >
            receiver_payoff(prior, eq) + 1e-12)
            coarsen_ok = false;
    }
    s.add("coarsening_hurts_receiver", coarsen_ok,
          "pooled posterior never beats the informative one");
}

void check_sweep_determinism(Suite& s) {
    const Prior prior = Prior::uniform();
    const CostSpec cost = CostSpec::quadratic(prior.mean(), 0.5);
    const std::vector<double> gammas{0.0, 0.1, 0.2, 0.3};
    const std::string a = io::sweep_csv(gamma_sweep(prior, cost, gammas));
    const std::string b = io::sweep_csv(gamma_sweep(prior, cost, gammas));
    s.add("sweep_deterministic", a == b, "identical CSV across repeat runs");
}

}  // namespace

std::vector<CheckResult> run_all(std::uint64_t seed, int n_random) {
    Suite s;
    std::mt19937_64 rng(seed);
    check_distribution_shape(s);
    check_mpc_oracle(s, rng, n_random);
    check_inner_oracle(s, rng, n_random);
    check_response_continuity(s, rng, std::max(10, n_random / 2));
    check_equilibrium_existence(s);
    check_welfare_identities(s);
    check_sweep_determinism(s);
    return s.results;
}

}  // namespace disclosure::checks
