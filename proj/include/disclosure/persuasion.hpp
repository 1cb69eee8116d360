#pragma once

#include <optional>

#include "disclosure/costs.hpp"
#include "disclosure/dist.hpp"

namespace disclosure {

/**
 * Sender's value of holding posterior mean x when the receiver believes
 * alpha after the null message and certification costs gamma:
 *
 *   V(x) = alpha - kappa*c(x)       for x <  alpha + gamma
 *   V(x) = x - gamma - kappa*c(x)   for x >= alpha + gamma
 *
 * The posterior exactly at the kink is treated as certified; both branches
 * agree there, so payoffs are unaffected by the tie-break.
 */
struct ValueConfig {
    ValueConfig(double alpha, double gamma, CostSpec cost);

    double alpha;
    double gamma;
    CostSpec cost;

    double kink() const { return alpha + gamma; }
};

double value_at(const ValueConfig& cfg, double x);
/// One-sided derivative of V consistent with the certified-at-kink rule.
double value_deriv_at(const ValueConfig& cfg, double x);

enum class CertShape { Affine, Kinked, Degenerate };

/**
 * Convex piecewise-affine function p majorizing V and touching it on the
 * optimum's support; the optimality certificate for the inner problem.
 * Affine and Degenerate certificates use a single piece (hi == lo).
 */
struct PriceCertificate {
    CertShape shape = CertShape::Degenerate;
    double slope_lo = 0.0, intercept_lo = 0.0;
    double slope_hi = 0.0, intercept_hi = 0.0;
    double kink_x = 0.0;       // only meaningful for Kinked
    double duality_gap = 0.0;  // |∫p dF − value|

    double operator()(double x) const {
        const double lo = slope_lo * x + intercept_lo;
        const double hi = slope_hi * x + intercept_hi;
        return shape == CertShape::Kinked ? std::max(lo, hi) : lo;
    }
};

enum class InnerKind { Degenerate, MonotonePartitional, BiPooling };

/// One evaluated candidate class inside the structural search.
struct CandidateEval {
    bool present = false;
    InnerKind kind = InnerKind::Degenerate;
    double x_lo = 0.0, x_hi = 0.0, w_lo = 1.0;
    double t = 0.0;  // truncation point (MonotonePartitional only)
    double value = 0.0;
};

/**
 * Allocation-free core of the structural solver; used directly by the
 * equilibrium fixed-point scan.  Evaluates the three candidate classes
 * (degenerate at the mean, monotone partitional, bi-pooling binary) and
 * records each class's best member.
 */
struct ResponseCore {
    CandidateEval degenerate;
    CandidateEval partitional;
    CandidateEval bipool;

    const CandidateEval& best() const;
    /// Runner-up among present candidates (nullptr if fewer than two).
    const CandidateEval* second() const;
    /// Lower end of the best response's support (mu when degenerate).
    double lower_support() const { return best().x_lo; }
};

ResponseCore solve_inner_core(const Prior& prior, const ValueConfig& cfg);

struct InnerAlternative {
    InnerKind kind = InnerKind::Degenerate;
    double value = 0.0;
    PosteriorDist g;
};

struct InnerSolution {
    InnerKind kind = InnerKind::Degenerate;
    PosteriorDist g;
    double value = 0.0;
    PriceCertificate certificate;
    /// Populated when another candidate class comes within 1e-8 of the
    /// winning value (near-ties occur at parameter-region boundaries).
    std::optional<InnerAlternative> near_tie;
};

/**
 * Structural solution of the inner acquisition problem: maximize ∫V dG
 * over mean-preserving contractions of the prior.  Candidates are tried in
 * descending value order and the first one whose price certificate passes
 * verification is returned; throws NoCandidateConverged if none does.
 */
InnerSolution solve_inner(const Prior& prior, const ValueConfig& cfg);

struct LpInnerSolution {
    PosteriorDist g;
    double value = 0.0;
    int grid_size = 0;
};

/**
 * Independent LP oracle on an n-point grid (augmented with mu, alpha, and
 * the kink): maximize Σ V(x_i) g_i subject to the sum, mean, and pointwise
 * RS-integral constraints, solved by dense two-phase simplex.
 */
LpInnerSolution solve_inner_lp(const Prior& prior, const ValueConfig& cfg, int n);

/// Builds the supporting price function for a solver output g.
/// Throws CertificateFailed if no convex supporting shape exists.
PriceCertificate price_certificate(const Prior& prior, const ValueConfig& cfg,
                                   const PosteriorDist& g);

struct CertificateCheck {
    bool ok = false;
    double worst_majorization = 0.0;  // max over grid of V(x) - p(x)
    double worst_majorization_at = 0.0;
    double worst_support_gap = 0.0;  // max over support of |p - V|
    double duality_gap = 0.0;
    explicit operator bool() const { return ok; }
};

/// Grid majorization (tol 1e-7), support tangency (tol 1e-7), and strong
/// duality |∫p dF − value| ≤ 1e-6.
CertificateCheck verify_certificate(const Prior& prior, const ValueConfig& cfg,
                                    const PosteriorDist& g,
                                    const PriceCertificate& cert, double value);

/// Minimum support point; mu-atom location for degenerate outputs.
double lower_support(const PosteriorDist& g);

}  // namespace disclosure
