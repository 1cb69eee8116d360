#pragma once

#include <optional>
#include <string>
#include <vector>

#include "disclosure/costs.hpp"
#include "disclosure/dist.hpp"
#include "disclosure/persuasion.hpp"

namespace disclosure {

enum class EqKind { MonotonePartitional, BiPooling, NoLearnCert, NoLearnNoCert };

const char* to_string(EqKind k);

struct Equilibrium {
    EqKind kind = EqKind::NoLearnNoCert;
    double alpha = 0.0;           // receiver belief after the empty message
    PosteriorDist g;
    double cert_threshold = 0.0;  // posteriors >= this are certified
    double cert_probability = 0.0;
    double sender_payoff = 0.0;
    double receiver_payoff = 0.0;
    double residual = 0.0;        // |L(alpha) - alpha| for learning kinds
    PriceCertificate certificate;
    bool at_boundary = false;     // found by probing a response-regime jump
};

/// Continuum of binary-support equilibria at the knife-edge fee; reported as
/// an interval of supported alphas plus a few representative members.
struct BiPoolingFamily {
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    double support_gap = 0.0;  // distance between the two atoms
    std::vector<Equilibrium> samples;
};

struct EquilibriumSet {
    std::vector<Equilibrium> equilibria;  // sorted by alpha
    std::optional<BiPoolingFamily> family;
};

struct NoLearnCheck {
    bool holds = false;
    double worst_value = 0.0;  // most threatening deviation margin found
    double worst_at = 0.0;
};

/// Is "acquire nothing, never certify" an equilibrium?  Tests whether the
/// certified branch's tangent from the mean stays below the uncertified
/// payoff on [mu+gamma, 1].
NoLearnCheck check_no_learn_no_cert(const Prior& prior, const CostSpec& cost,
                                    double gamma);

/// Is "acquire nothing, always certify" (with zero belief off path) an
/// equilibrium?  Requires mu >= gamma and no profitable uncertified pooling
/// on [0, gamma].
NoLearnCheck check_no_learn_cert(const Prior& prior, const CostSpec& cost,
                                 double gamma);

/// L(alpha): lowest posterior the sender leaves uncertified when the
/// receiver's fallback belief is alpha (equals mu for degenerate responses).
double best_response_belief(const Prior& prior, const CostSpec& cost,
                            double gamma, double alpha);

/// All equilibria of the covert game: no-learning profiles by the tangency
/// tests, learning profiles as fixed points of L on a scanned alpha grid.
EquilibriumSet covert_equilibria(const Prior& prior, const CostSpec& cost,
                                 double gamma);

/// Observable-experiment variant: information has no value to the sender, so
/// nothing is acquired and nothing certified.
Equilibrium overt_equilibrium(const Prior& prior, const CostSpec& cost,
                              double gamma);

struct Kappa0Benchmark {
    bool no_certification = false;  // fee exceeds any certification surplus
    double x_star = 0.0;            // marginal certified state
    double alpha = 0.0;             // uncertified pool mean x_star - gamma
    PosteriorDist worst_g;          // receiver-worst outcome distribution
    double sender_payoff = 0.0;
    double receiver_payoff_worst = 0.0;
    double receiver_payoff_best = 0.0;  // full revelation above x_star
};

/// Free-evidence benchmark: unique certification cutoff x* solving
/// xi(x*) = gamma, with the receiver-worst and receiver-best outcomes.
Kappa0Benchmark benchmark_kappa0(const Prior& prior, double gamma);

struct KappaLimitRow {
    double kappa = 0.0;
    double alpha = 0.0;
    bool has_learning = false;
    PosteriorDist g;
    double distance = 0.0;  // max atom displacement from the benchmark
};

struct KappaLimitReport {
    Kappa0Benchmark benchmark;
    std::vector<KappaLimitRow> rows;
    bool distances_decreasing = false;
};

/// Track the learning equilibrium along a decreasing kappa schedule and
/// measure convergence to the free-evidence receiver-worst outcome.
KappaLimitReport kappa_limit(const Prior& prior, const CostSpec& cost,
                             double gamma, const std::vector<double>& kappas);

enum class Region {
    A,  // only no-learning, uncertified
    B,  // only no-learning, certified
    C,  // both no-learning kinds coexist
    D,  // a learning equilibrium exists
};

const char* to_string(Region r);

struct RegionCell {
    double kappa = 0.0;
    double gamma = 0.0;
    Region region = Region::A;
    int n_equilibria = 0;
};

/// Label one (kappa, gamma) cell; cost_template supplies the cost shape, its
/// kappa is replaced per cell.  D takes display priority when learning and
/// no-learning equilibria coexist.
RegionCell region_classify(const Prior& prior, const CostSpec& cost_template,
                           double kappa, double gamma);

/// Row-major map over the grid (gamma varies fastest).  Cells are
/// independent; results are ordered by index regardless of scheduling.
std::vector<RegionCell> region_map(const Prior& prior,
                                   const CostSpec& cost_template,
                                   const std::vector<double>& kappas,
                                   const std::vector<double>& gammas);

}  // namespace disclosure
