#include "disclosure/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace disclosure {

namespace {

constexpr double kTol = 1e-9;

double best_receiver(const Prior& prior, const EquilibriumSet& set) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Equilibrium& eq : set.equilibria)
        best = std::max(best, receiver_payoff(prior, eq));
    if (set.family)
        for (const Equilibrium& eq : set.family->samples)
            best = std::max(best, receiver_payoff(prior, eq));
    return best;
}

void append_rows(SweepTable& table, const Prior& prior, const CostSpec& cost,
                 double gamma, const EquilibriumSet& set) {
    auto push = [&](const Equilibrium& eq) {
        SweepRow row;
        row.kappa = cost.kappa();
        row.gamma = gamma;
        row.eq = eq;
        row.welfare = sender_payoff(prior, cost, gamma, eq);
        table.rows.push_back(std::move(row));
    };
    for (const Equilibrium& eq : set.equilibria) push(eq);
    if (set.family)
        for (const Equilibrium& eq : set.family->samples) push(eq);
}

}  // namespace

double receiver_payoff(const Prior& prior, const Equilibrium& eq) {
    return eq.g.variance() - prior.variance();
}

WelfareReport sender_payoff(const Prior& prior, const CostSpec& cost,
                            double gamma, const Equilibrium& eq) {
    WelfareReport rep;
    double certified = 0.0;
    for (const Atom& a : eq.g.atoms()) {
        const bool cert = a.x >= eq.cert_threshold - 1e-12;
        rep.gross += a.w * (cert ? a.x : eq.alpha);
        if (cert) certified += a.w;
    }
    rep.cert_cost_paid = gamma * certified;
    rep.info_cost = total_cost(cost, eq.g);
    rep.sender = rep.gross - rep.cert_cost_paid - rep.info_cost;
    rep.receiver = receiver_payoff(prior, eq);

    // Cross-check against the kinked value function evaluated atom by atom.
    const ValueConfig cfg(std::min(eq.alpha, cost.mu()), gamma, cost);
    double direct = 0.0;
    for (const Atom& a : eq.g.atoms()) direct += a.w * value_at(cfg, a.x);
    rep.slack = std::fabs(rep.sender - direct);
    return rep;
}

const char* to_string(ParetoOrder o) {
    switch (o) {
        case ParetoOrder::FirstDominates: return "1Dominates";
        case ParetoOrder::SecondDominates: return "2Dominates";
        case ParetoOrder::Incomparable: return "Incomparable";
        case ParetoOrder::Equal: return "Equal";
    }
    return "?";
}

ParetoOrder pareto_compare(double sender1, double receiver1, double sender2,
                           double receiver2) {
    double ds = sender1 - sender2;
    double dr = receiver1 - receiver2;
    if (std::fabs(ds) <= kTol) ds = 0.0;
    if (std::fabs(dr) <= kTol) dr = 0.0;
    if (ds == 0.0 && dr == 0.0) return ParetoOrder::Equal;
    if (ds >= 0.0 && dr >= 0.0) return ParetoOrder::FirstDominates;
    if (ds <= 0.0 && dr <= 0.0) return ParetoOrder::SecondDominates;
    return ParetoOrder::Incomparable;
}

ParetoOrder pareto_compare(const Equilibrium& eq1, const Equilibrium& eq2) {
    return pareto_compare(eq1.sender_payoff, eq1.receiver_payoff,
                          eq2.sender_payoff, eq2.receiver_payoff);
}

SweepTable gamma_sweep(const Prior& prior, const CostSpec& cost,
                       const std::vector<double>& gammas) {
    if (gammas.empty())
        throw std::invalid_argument("gamma_sweep requires a nonempty grid");
    SweepTable table;
    double best = -std::numeric_limits<double>::infinity();
    for (double gamma : gammas) {
        const EquilibriumSet set = covert_equilibria(prior, cost, gamma);
        append_rows(table, prior, cost, gamma, set);
        const double r = best_receiver(prior, set);
        if (r > best) {
            best = r;
            table.receiver_preferred_gamma = gamma;
        }
        if (gamma == 0.0) {
            for (const Equilibrium& eq : set.equilibria)
                if (std::fabs(receiver_payoff(prior, eq) + prior.variance()) >
                    kTol)
                    table.gamma0_receiver_ignorant = false;
        }
    }
    return table;
}

SweepTable kappa_sweep(const Prior& prior, const CostSpec& cost_template,
                       double gamma, const std::vector<double>& kappas) {
    if (kappas.empty())
        throw std::invalid_argument("kappa_sweep requires a nonempty grid");
    SweepTable table;
    double best = -std::numeric_limits<double>::infinity();
    for (double kap : kappas) {
        const CostSpec cost = cost_template.with_kappa(kap);
        const EquilibriumSet set = covert_equilibria(prior, cost, gamma);
        append_rows(table, prior, cost, gamma, set);
        const double r = best_receiver(prior, set);
        if (r > best) {
            best = r;
            table.receiver_preferred_kappa = kap;
        }
    }
    return table;
}

}  // namespace disclosure
