#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace disclosure {

enum class PriorFamily { Uniform, Beta, PiecewiseLinear };

/// Diagnostic from the log-concavity grid check of a prior cdf.
struct LogConcavityReport {
    bool pass = true;
    double worst_second_difference = 0.0;  // max second difference of log F
    double at = 0.0;                       // abscissa of the worst value
};

/**
 * Prior distribution of the state on [0,1].
 *
 * Families: Uniform, Beta(a,b) with a,b >= 1, and a piecewise-linear cdf
 * given by knots (x_i, F(x_i)).  All evaluators are closed forms (the Beta
 * cdf uses the regularized incomplete beta function); the cached mean is
 * verified against adaptive quadrature of x*f(x) at construction.
 *
 * Immutable after construction and safe to share across threads.
 */
class Prior {
  public:
    static Prior uniform();
    static Prior beta(double a, double b);
    /// Knots are (x, F(x)) pairs; first must be (0,0), last (1,1), both
    /// coordinates strictly increasing (implies a positive step density).
    static Prior piecewise_linear(std::vector<std::pair<double, double>> knots);

    PriorFamily family() const { return family_; }
    double mean() const { return mean_; }
    double variance() const { return var_; }

    double cdf(double x) const;
    double density(double x) const;
    /// Partial first moment  ∫₀ˣ s f(s) ds.
    double partial_mean(double x) const;
    /// ∫₀ˣ F(s) ds, evaluated as x F(x) − partial_mean(x).
    double rs_integral(double x) const;
    /// Inverse cdf; p in [0,1].
    double quantile(double p) const;

    /// Log-concavity diagnostic computed at construction (1000-point grid).
    /// Always passing for Uniform/Beta; piecewise priors may fail (warning).
    const LogConcavityReport& logconcavity_diagnostic() const { return lc_; }

    double beta_a() const { return a_; }
    double beta_b() const { return b_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  private:
    Prior() = default;
    void finalize();  // caches mean/variance, verifies mean by quadrature

    PriorFamily family_ = PriorFamily::Uniform;
    double a_ = 0.0, b_ = 0.0;   // Beta parameters
    bool beta_int_ = false;      // integer-parameter fast path
    int ia_ = 0, ib_ = 0;
    double beta_norm_ = 1.0;     // 1/B(a,b)
    std::vector<std::pair<double, double>> knots_;
    std::vector<double> seg_density_;       // step density per knot segment
    std::vector<double> seg_partial_mean_;  // partial mean at each knot
    double mean_ = 0.5;
    double var_ = 1.0 / 12.0;
    LogConcavityReport lc_;
};

/// E[s | s <= t]; throws DegenerateTruncation if F(t) < 1e-12.
double cond_mean_below(const Prior& prior, double t);
/// E[s | s >= t]; throws DegenerateTruncation if 1-F(t) < 1e-12.
double cond_mean_above(const Prior& prior, double t);
/// xi(x) = x - E[s | s <= x]; strictly increasing for log-concave priors.
double xi(const Prior& prior, double x);
/// Second-difference concavity check of log F on a gridsize-point grid.
LogConcavityReport check_logconcave(const Prior& prior, int gridsize = 1000);

struct Atom {
    double x = 0.0;
    double w = 0.0;
};

/**
 * Finitely supported distribution of posterior means.
 *
 * Two provenances share the representation: hand-built atom lists (solver
 * outputs, at most two atoms) and grid-valued weight vectors from the LP
 * oracle.  Weights must be nonnegative and sum to 1 within 1e-10; they are
 * rescaled to sum exactly to 1.  rs evaluation uses cumulative sums.
 */
class PosteriorDist {
  public:
    static PosteriorDist degenerate(double x);
    static PosteriorDist from_atoms(std::vector<Atom> atoms);
    static PosteriorDist from_grid(const std::vector<double>& locations,
                                   const std::vector<double>& weights);

    bool grid_based() const { return grid_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double mean() const { return mean_; }
    double variance() const;

    /// ∫₀ˣ G(s) ds = Σ w_i · max(0, x − x_i).
    double rs_integral(double x) const;

    double min_support(double weight_tol = 0.0) const;
    double max_support(double weight_tol = 0.0) const;
    std::size_t support_size(double weight_tol = 0.0) const;
    bool is_degenerate(double weight_tol = 1e-12) const;

  private:
    std::vector<Atom> atoms_;        // sorted by location, strictly increasing
    std::vector<double> cum_w_;      // cumulative weights
    std::vector<double> cum_wx_;     // cumulative weight*location
    double mean_ = 0.0;
    bool grid_ = false;

    void build_cumulative();
};

/// Free-function form mirroring the posterior-side rs evaluation.
double rs_integral(const PosteriorDist& g, double x);

struct MpcReport {
    bool feasible = false;
    double worst_slack = 0.0;  // min over checkpoints of I_F(x) - I_G(x)
    double worst_at = 0.0;
    explicit operator bool() const { return feasible; }
};

/**
 * Mean-preserving-contraction feasibility of g relative to the prior:
 * I_G(x) <= I_F(x) + tol at 2001 checkpoints plus every atom location,
 * with mean preservation enforced up front (throws MeanMismatch).
 *
 * tol defaults: 1e-9 for analytic two-atom candidates; callers handling
 * grid-derived distributions should pass 1e-6.
 */
MpcReport mpc_feasible(const PosteriorDist& g, const Prior& prior,
                       double tol = 1e-9);

/**
 * Exact feasibility slack for a binary (or degenerate) distribution with
 * the prior mean: the interior minimum of I_F(x) - w*(x - x_lo) over the
 * support gap, located at the quantile F^{-1}(w).  Used by the structural
 * solver's hot path; agrees with mpc_feasible up to checkpoint resolution.
 */
double binary_mpc_slack(const Prior& prior, double x_lo, double x_hi,
                        double w_lo);

}  // namespace disclosure
