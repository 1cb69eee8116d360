#pragma once

#include <vector>

#include "disclosure/dist.hpp"

namespace disclosure {

enum class CostKind { Quadratic, QuadQuarticBlend, Polynomial };

/// Diagnostic from validate_cost: convexity margin and normalization error.
struct CostDiagnostic {
    bool pass = true;
    double worst_convexity = 0.0;  // min of c'' over the check grid
    double at_mu = 0.0;            // |c(mu)|
    double min_value = 0.0;        // min of c over the check grid
};

/**
 * Acquisition cost specification: C(G) = kappa * ∫ c dG with c strictly
 * convex, c(mu) = 0, and c >= 0.  All built-in kinds are polynomials in
 * u = x - mu, so a single coefficient vector drives evaluation:
 *   Quadratic          -> u^2
 *   QuadQuarticBlend   -> a u^2 + b u^4   (a > 0, b >= 0)
 *   Polynomial         -> sum_k coeffs[k] u^k  (validated)
 *
 * kappa = 0 is allowed; the equilibrium layer routes that case to the
 * free-evidence benchmark.  Immutable and shareable across threads.
 */
class CostSpec {
  public:
    static CostSpec quadratic(double mu, double kappa);
    static CostSpec quad_quartic_blend(double a, double b, double mu, double kappa);
    /// coeffs[k] multiplies (x-mu)^k; coeffs[0] must be 0.
    static CostSpec polynomial(std::vector<double> coeffs, double mu, double kappa);

    CostKind kind() const { return kind_; }
    double mu() const { return mu_; }
    double kappa() const { return kappa_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double blend_a() const { return blend_a_; }
    double blend_b() const { return blend_b_; }

    double cost_at(double x) const;          // c(x)
    double deriv_at(double x) const;         // c'(x)
    double second_deriv_at(double x) const;  // c''(x)

    /// Same cost shape with a different scale (used by kappa sweeps/limits).
    CostSpec with_kappa(double kappa) const;

  private:
    CostSpec() = default;
    CostKind kind_ = CostKind::Quadratic;
    double mu_ = 0.5;
    double kappa_ = 1.0;
    double blend_a_ = 0.0, blend_b_ = 0.0;
    std::vector<double> coeffs_;  // ascending powers of (x - mu)
};

/// kappa * sum over atoms of w * c(x); zero for the degenerate-at-mu dist.
double total_cost(const CostSpec& spec, const PosteriorDist& g);

/// Runs the invariant suite (normalization, strict convexity, bounds,
/// nonnegativity) on a 1000-point grid; throws InvalidCost on failure.
CostDiagnostic validate_cost(const CostSpec& spec);

}  // namespace disclosure
