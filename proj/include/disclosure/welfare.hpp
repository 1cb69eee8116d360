#pragma once

#include <optional>
#include <vector>

#include "disclosure/equilibrium.hpp"

namespace disclosure {

/// Sender payoff split into its additively separable pieces.  `slack` is the
/// defect of the decomposition against the direct kinked-value expectation
/// and should sit at rounding level.
struct WelfareReport {
    double sender = 0.0;
    double receiver = 0.0;
    double gross = 0.0;           // expected action before any costs
    double info_cost = 0.0;       // kappa-scaled acquisition cost
    double cert_cost_paid = 0.0;  // fee times certification probability
    double slack = 0.0;
};

/// Receiver's expected quadratic loss relative to full ignorance:
/// Var(g) - Var(prior), always <= 0.
double receiver_payoff(const Prior& prior, const Equilibrium& eq);

WelfareReport sender_payoff(const Prior& prior, const CostSpec& cost,
                            double gamma, const Equilibrium& eq);

enum class ParetoOrder { FirstDominates, SecondDominates, Incomparable, Equal };

const char* to_string(ParetoOrder o);

ParetoOrder pareto_compare(double sender1, double receiver1, double sender2,
                           double receiver2);
ParetoOrder pareto_compare(const Equilibrium& eq1, const Equilibrium& eq2);

struct SweepRow {
    double kappa = 0.0;
    double gamma = 0.0;
    Equilibrium eq;
    WelfareReport welfare;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    // Grid point whose best equilibrium pays the receiver the most.
    std::optional<double> receiver_preferred_gamma;
    std::optional<double> receiver_preferred_kappa;
    // When the grid touches gamma = 0, receiver welfare there must collapse
    // to full ignorance; recorded so callers can assert it.
    bool gamma0_receiver_ignorant = true;
};

SweepTable gamma_sweep(const Prior& prior, const CostSpec& cost,
                       const std::vector<double>& gammas);

SweepTable kappa_sweep(const Prior& prior, const CostSpec& cost_template,
                       double gamma, const std::vector<double>& kappas);

}  // namespace disclosure
