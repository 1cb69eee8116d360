#include "disclosure/persuasion.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "disclosure/errors.hpp"
#include "disclosure/numerics.hpp"
#include "disclosure/simplex.hpp"

namespace disclosure {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNearTie = 1e-8;      // candidate values this close are reported together
constexpr double kWeightEps = 1e-10;   // binary candidates thinner than this are degenerate
constexpr double kBranchEps = 1e-10;   // slack when classifying atoms against the kink

/// Certified branch regardless of the kink test (bi-tangency system form).
double upper_branch(const ValueConfig& cfg, double x) {
    return x - cfg.gamma - cfg.cost.kappa() * cfg.cost.cost_at(x);
}
/// Uncertified branch.
double lower_branch(const ValueConfig& cfg, double x) {
    return cfg.alpha - cfg.cost.kappa() * cfg.cost.cost_at(x);
}

struct MpRange {
    bool ok = false;
    double lo = 0.0, hi = 0.0;
};

/// Feasible truncation range {t : x_L(t) < kink <= x_H(t)}.  The conditional
/// means are increasing in t, so each constraint cuts one side at most.
MpRange mp_feasible_range(const Prior& prior, const ValueConfig& cfg) {
    MpRange r;
    const double kink = cfg.kink();
    if (kink <= 0.0) return r;  // no uncertified atom can exist
    const double mu = prior.mean();
    double lo = prior.quantile(1e-9);
    double hi = prior.quantile(1.0 - 1e-9);
    if (!(lo < hi)) return r;
    if (kink > mu) {
        // Need x_H(t) >= kink; x_H climbs from ~mu to ~1.
        if (cond_mean_above(prior, hi) < kink) return r;
        if (cond_mean_above(prior, lo) < kink)
            lo = num::bisect(
                [&](double t) { return cond_mean_above(prior, t) - kink; }, lo,
                hi, 1e-13);
    } else {
        // Need x_L(t) < kink; x_L climbs from ~0 to ~mu.
        if (cond_mean_below(prior, lo) >= kink) return r;
        if (cond_mean_below(prior, hi) >= kink)
            hi = num::bisect(
                [&](double t) { return cond_mean_below(prior, t) - kink; }, lo,
                hi, 1e-13);
    }
    if (hi - lo < 1e-12) return r;
    r.ok = true;
    r.lo = lo;
    r.hi = hi;
    return r;
}

/// Truncation objective: F(t) V(x_L(t)) + (1-F(t)) V(x_H(t)), evaluated with
/// the exact kink rule so it is continuous across branch switches.
double mp_objective(const Prior& prior, const ValueConfig& cfg, double t) {
    const double ft = prior.cdf(t);
    const double pm = prior.partial_mean(t);
    const double xl = pm / ft;
    const double xh = (prior.mean() - pm) / (1.0 - ft);
    return ft * value_at(cfg, xl) + (1.0 - ft) * value_at(cfg, xh);
}

/// Tangent-crossing residual: the tangents to V at x_L(t) and x_H(t) meet at
/// t exactly when the truncation objective is stationary (W'(t) = f(t)*D(t)).
double mp_tangent_gap(const Prior& prior, const ValueConfig& cfg, double t) {
    const double kink = cfg.kink();
    const double ft = prior.cdf(t);
    const double pm = prior.partial_mean(t);
    const double xl = pm / ft;
    const double xh = (prior.mean() - pm) / (1.0 - ft);
    if (!(xl < kink && xh >= kink)) return std::numeric_limits<double>::quiet_NaN();
    const double kap = cfg.cost.kappa();
    const double sl = -kap * cfg.cost.deriv_at(xl);
    const double sh = 1.0 - kap * cfg.cost.deriv_at(xh);
    return (lower_branch(cfg, xl) + sl * (t - xl)) -
           (upper_branch(cfg, xh) + sh * (t - xh));
}

CandidateEval search_partitional(const Prior& prior, const ValueConfig& cfg) {
    CandidateEval cand;
    const MpRange range = mp_feasible_range(prior, cfg);
    if (!range.ok) return cand;

    constexpr int kGrid = 512;
    const double step = (range.hi - range.lo) / (kGrid - 1);
    double best_t = range.lo, best_v = -kInf;
    int best_i = 0;
    for (int i = 0; i < kGrid; ++i) {
        const double t = range.lo + i * step;
        const double v = mp_objective(prior, cfg, t);
        if (v > best_v) {
            best_v = v;
            best_t = t;
            best_i = i;
        }
    }
    const double blo = range.lo + std::max(0, best_i - 1) * step;
    const double bhi = range.lo + std::min(kGrid - 1, best_i + 1) * step;
    best_t = num::golden_max(
        [&](double t) { return mp_objective(prior, cfg, t); }, blo, bhi, 1e-10);

    // Stationarity polish: bisect the tangent-crossing residual when it
    // brackets a root (it shares the sign of W', so interior maxima qualify).
    const double dlo = mp_tangent_gap(prior, cfg, blo);
    const double dhi = mp_tangent_gap(prior, cfg, bhi);
    if (std::isfinite(dlo) && std::isfinite(dhi) &&
        (dlo > 0.0) != (dhi > 0.0)) {
        const double t_foc = num::bisect(
            [&](double t) {
                const double d = mp_tangent_gap(prior, cfg, t);
                return std::isfinite(d) ? d : (t < best_t ? 1.0 : -1.0);
            },
            blo, bhi, 1e-13);
        if (mp_objective(prior, cfg, t_foc) >= best_v - 1e-12) best_t = t_foc;
    }

    const double ft = prior.cdf(best_t);
    if (ft < kWeightEps || 1.0 - ft < kWeightEps) return cand;
    const double xl = prior.partial_mean(best_t) / ft;
    const double xh = (prior.mean() - prior.partial_mean(best_t)) / (1.0 - ft);
    if (!(xl < cfg.kink() && xh >= cfg.kink() - kBranchEps)) return cand;

    cand.present = true;
    cand.kind = InnerKind::MonotonePartitional;
    cand.x_lo = xl;
    cand.x_hi = xh;
    cand.w_lo = ft;
    cand.t = best_t;
    cand.value = mp_objective(prior, cfg, best_t);
    return cand;
}

CandidateEval search_bipool(const Prior& prior, const ValueConfig& cfg) {
    CandidateEval cand;
    const double kap = cfg.cost.kappa();
    const double kink = cfg.kink();
    const double mu = prior.mean();

    // Quadratic-cost closed form seeds the damped Newton iteration.
    double xl = kink - 1.0 / (4.0 * kap);
    double xh = kink + 1.0 / (4.0 * kap);
    xl = std::min(std::max(xl, -0.25), kink - 1e-6);
    xh = std::max(std::min(xh, 1.25), kink + 1e-6);

    auto residual = [&](double l, double h, double& r1, double& r2) {
        r1 = kap * (cfg.cost.deriv_at(h) - cfg.cost.deriv_at(l)) - 1.0;
        r2 = upper_branch(cfg, h) - lower_branch(cfg, l) -
             (1.0 - kap * cfg.cost.deriv_at(h)) * (h - l);
    };

    double r1, r2;
    residual(xl, xh, r1, r2);
    bool converged = false;
    for (int it = 0; it < 80; ++it) {
        double norm = std::max(std::fabs(r1), std::fabs(r2));
        if (norm <= 1e-13) {
            converged = true;
            break;
        }
        const double j11 = -kap * cfg.cost.second_deriv_at(xl);
        const double j12 = kap * cfg.cost.second_deriv_at(xh);
        const double j21 = kap * cfg.cost.deriv_at(xl) + 1.0 -
                           kap * cfg.cost.deriv_at(xh);
        const double j22 = kap * cfg.cost.second_deriv_at(xh) * (xh - xl);
        const double det = j11 * j22 - j12 * j21;
        if (std::fabs(det) < 1e-16 || !std::isfinite(det)) return cand;
        double dl = (-r1 * j22 + r2 * j12) / det;
        double dh = (-j11 * r2 + j21 * r1) / det;
        // Step halving until the residual shrinks (or the step dies).
        double lam = 1.0;
        bool accepted = false;
        for (int half = 0; half < 40; ++half, lam *= 0.5) {
            double nl = xl + lam * dl, nh = xh + lam * dh;
            nl = std::min(std::max(nl, -0.5), 1.5);
            nh = std::min(std::max(nh, -0.5), 1.5);
            if (nh - nl < 1e-10) continue;
            double nr1, nr2;
            residual(nl, nh, nr1, nr2);
            if (std::max(std::fabs(nr1), std::fabs(nr2)) < norm) {
                xl = nl;
                xh = nh;
                r1 = nr1;
                r2 = nr2;
                accepted = true;
                break;
            }
        }
        if (!accepted) return cand;
    }
    if (!converged) return cand;
    if (!(xl >= -1e-12 && xh <= 1.0 + 1e-12)) return cand;
    xl = std::min(1.0, std::max(0.0, xl));
    xh = std::min(1.0, std::max(0.0, xh));
    if (!(xl < kink - kBranchEps && xh >= kink - kBranchEps)) return cand;
    const double w = (xh - mu) / (xh - xl);
    if (!(w > kWeightEps && w < 1.0 - kWeightEps)) return cand;
    // Exact feasibility of the binary contraction (worst slack at F^{-1}(w)).
    if (binary_mpc_slack(prior, xl, xh, w) < -1e-9) return cand;

    cand.present = true;
    cand.kind = InnerKind::BiPooling;
    cand.x_lo = xl;
    cand.x_hi = xh;
    cand.w_lo = w;
    cand.t = std::numeric_limits<double>::quiet_NaN();
    cand.value = w * lower_branch(cfg, xl) + (1.0 - w) * upper_branch(cfg, xh);
    return cand;
}

PosteriorDist candidate_dist(const CandidateEval& c, double mu) {
    if (c.kind == InnerKind::Degenerate) return PosteriorDist::degenerate(mu);
    return PosteriorDist::from_atoms(
        {Atom{c.x_lo, c.w_lo}, Atom{c.x_hi, 1.0 - c.w_lo}});
}

/// ∫ p dF for a piecewise-affine certificate, via prior partial means.
double certificate_prior_integral(const Prior& prior,
                                  const PriceCertificate& cert) {
    const double mu = prior.mean();
    if (cert.shape != CertShape::Kinked)
        return cert.slope_lo * mu + cert.intercept_lo;
    const double k = cert.kink_x;
    const double fk = prior.cdf(k);
    const double mk = prior.partial_mean(k);
    return cert.slope_lo * mk + cert.intercept_lo * fk +
           cert.slope_hi * (mu - mk) + cert.intercept_hi * (1.0 - fk);
}

}  // namespace

ValueConfig::ValueConfig(double alpha_, double gamma_, CostSpec cost_)
    : alpha(alpha_), gamma(gamma_), cost(std::move(cost_)) {
    if (!(alpha >= -1e-12 && alpha <= cost.mu() + 1e-9))
        throw std::invalid_argument("ValueConfig: alpha must lie in [0, mu]");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("ValueConfig: gamma must be nonnegative");
    alpha = std::max(0.0, alpha);
}

double value_at(const ValueConfig& cfg, double x) {
    const double c = cfg.cost.kappa() * cfg.cost.cost_at(x);
    return x < cfg.kink() ? cfg.alpha - c : x - cfg.gamma - c;
}

double value_deriv_at(const ValueConfig& cfg, double x) {
    const double dc = cfg.cost.kappa() * cfg.cost.deriv_at(x);
    return x < cfg.kink() ? -dc : 1.0 - dc;
}

const CandidateEval& ResponseCore::best() const {
    const CandidateEval* b = &degenerate;
    if (partitional.present && partitional.value > b->value) b = &partitional;
    if (bipool.present && bipool.value > b->value) b = &bipool;
    return *b;
}

const CandidateEval* ResponseCore::second() const {
    const CandidateEval* b = &best();
    const CandidateEval* s = nullptr;
    for (const CandidateEval* c : {&degenerate, &partitional, &bipool}) {
        if (c == b || !c->present) continue;
        if (s == nullptr || c->value > s->value) s = c;
    }
    return s;
}

ResponseCore solve_inner_core(const Prior& prior, const ValueConfig& cfg) {
    if (!(cfg.cost.kappa() > 0.0))
        throw std::invalid_argument("solve_inner requires kappa > 0");
    if (std::fabs(prior.mean() - cfg.cost.mu()) > 1e-9)
        throw std::invalid_argument("cost mu must equal the prior mean");
    ResponseCore core;
    const double mu = prior.mean();
    core.degenerate.present = true;
    core.degenerate.kind = InnerKind::Degenerate;
    core.degenerate.x_lo = core.degenerate.x_hi = mu;
    core.degenerate.w_lo = 1.0;
    core.degenerate.value = value_at(cfg, mu);
    core.partitional = search_partitional(prior, cfg);
    core.bipool = search_bipool(prior, cfg);
    return core;
}

PriceCertificate price_certificate(const Prior& prior, const ValueConfig& cfg,
                                   const PosteriorDist& g) {
    constexpr double kSupportTol = 1e-9;
    const double kap = cfg.cost.kappa();
    const double kink = cfg.kink();
    std::vector<Atom> sup;
    for (const Atom& a : g.atoms())
        if (a.w > kSupportTol) sup.push_back(a);
    if (sup.empty() || sup.size() > 2)
        throw CertificateFailed("certificate requires one or two support atoms");

    PriceCertificate cert;
    double value = 0.0;
    for (const Atom& a : sup) value += a.w * value_at(cfg, a.x);

    if (sup.size() == 1) {
        const double x0 = sup.front().x;
        if (std::fabs(x0 - prior.mean()) > 1e-6)
            throw CertificateFailed("degenerate output is not at the prior mean");
        const double dc = kap * cfg.cost.deriv_at(x0);
        const double slope = x0 >= kink ? 1.0 - dc : -dc;
        cert.shape = CertShape::Degenerate;
        cert.slope_lo = cert.slope_hi = slope;
        cert.intercept_lo = cert.intercept_hi = value_at(cfg, x0) - slope * x0;
    } else {
        const double xl = sup[0].x, xh = sup[1].x;
        if (!(xl < kink && xh >= kink - kBranchEps))
            throw CertificateFailed("binary support does not straddle the kink");
        const double sl = -kap * cfg.cost.deriv_at(xl);
        const double sh = 1.0 - kap * cfg.cost.deriv_at(std::max(xh, kink));
        const double bl = value_at(cfg, xl) - sl * xl;
        const double bh = value_at(cfg, xh) - sh * xh;
        if (std::fabs(sl - sh) <= 1e-9) {
            // Equal tangent slopes: single supporting line through both atoms.
            const double s = (value_at(cfg, xh) - value_at(cfg, xl)) / (xh - xl);
            cert.shape = CertShape::Affine;
            cert.slope_lo = cert.slope_hi = s;
            cert.intercept_lo = cert.intercept_hi = value_at(cfg, xl) - s * xl;
        } else if (sl < sh) {
            const double kx = (bh - bl) / (sl - sh);
            if (!(kx >= xl - 1e-7 && kx <= xh + 1e-7))
                throw CertificateFailed("tangent crossing escapes the support gap");
            cert.shape = CertShape::Kinked;
            cert.slope_lo = sl;
            cert.intercept_lo = bl;
            cert.slope_hi = sh;
            cert.intercept_hi = bh;
            cert.kink_x = kx;
        } else {
            throw CertificateFailed("support tangents are not convex-ordered");
        }
    }
    cert.duality_gap = std::fabs(certificate_prior_integral(prior, cert) - value);
    return cert;
}

CertificateCheck verify_certificate(const Prior& prior, const ValueConfig& cfg,
                                    const PosteriorDist& g,
                                    const PriceCertificate& cert,
                                    double value) {
    CertificateCheck chk;
    chk.worst_majorization = -kInf;
    constexpr int kGrid = 4001;
    auto probe = [&](double x) {
        const double viol = value_at(cfg, x) - cert(x);
        if (viol > chk.worst_majorization) {
            chk.worst_majorization = viol;
            chk.worst_majorization_at = x;
        }
    };
    for (int i = 0; i < kGrid; ++i) probe(double(i) / (kGrid - 1));
    probe(std::min(1.0, std::max(0.0, cfg.kink())));
    if (cert.shape == CertShape::Kinked)
        probe(std::min(1.0, std::max(0.0, cert.kink_x)));
    for (const Atom& a : g.atoms()) {
        probe(a.x);
        if (a.w > 1e-9)
            chk.worst_support_gap =
                std::max(chk.worst_support_gap,
                         std::fabs(cert(a.x) - value_at(cfg, a.x)));
    }
    chk.duality_gap = std::fabs(certificate_prior_integral(prior, cert) - value);
    chk.ok = chk.worst_majorization <= 1e-7 && chk.worst_support_gap <= 1e-7 &&
             chk.duality_gap <= 1e-6;
    return chk;
}

InnerSolution solve_inner(const Prior& prior, const ValueConfig& cfg) {
    const ResponseCore core = solve_inner_core(prior, cfg);
    std::vector<const CandidateEval*> order;
    for (const CandidateEval* c :
         {&core.degenerate, &core.partitional, &core.bipool})
        if (c->present) order.push_back(c);
    std::sort(order.begin(), order.end(),
              [](const CandidateEval* a, const CandidateEval* b) {
                  return a->value > b->value;
              });

    std::ostringstream diag;
    for (const CandidateEval* c : order) {
        PosteriorDist g = candidate_dist(*c, prior.mean());
        try {
            PriceCertificate cert = price_certificate(prior, cfg, g);
            const CertificateCheck chk =
                verify_certificate(prior, cfg, g, cert, c->value);
            if (!chk.ok) {
                diag << " [candidate value " << c->value << ": majorization "
                     << chk.worst_majorization << " at "
                     << chk.worst_majorization_at << ", gap " << chk.duality_gap
                     << "]";
                continue;
            }
            InnerSolution sol;
            sol.kind = c->kind;
            sol.g = std::move(g);
            sol.value = c->value;
            sol.certificate = cert;
            for (const CandidateEval* o : order) {
                if (o == c || o->kind == c->kind) continue;
                if (std::fabs(o->value - c->value) <= kNearTie) {
                    sol.near_tie = InnerAlternative{
                        o->kind, o->value, candidate_dist(*o, prior.mean())};
                    break;
                }
            }
            return sol;
        } catch (const CertificateFailed& e) {
            diag << " [candidate value " << c->value << ": " << e.what() << "]";
        }
    }
    throw NoCandidateConverged("no inner candidate carries a valid certificate:" +
                               diag.str());
}

LpInnerSolution solve_inner_lp(const Prior& prior, const ValueConfig& cfg,
                               int n) {
    if (n < 51) throw std::invalid_argument("solve_inner_lp requires n >= 51");
    if (!(cfg.cost.kappa() >= 0.0))
        throw std::invalid_argument("solve_inner_lp requires kappa >= 0");

    std::vector<double> grid;
    grid.reserve(std::size_t(n) + 3);
    for (int i = 0; i < n; ++i) grid.push_back(double(i) / (n - 1));
    for (double extra : {prior.mean(), cfg.alpha, cfg.kink()}) {
        if (extra >= 0.0 && extra <= 1.0) grid.push_back(extra);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return b - a < 1e-12; }),
               grid.end());
    const int m = int(grid.size());

    std::vector<double> obj(m);
    for (int j = 0; j < m; ++j) obj[j] = value_at(cfg, grid[j]);

    std::vector<std::vector<double>> a_ub;
    std::vector<double> b_ub;
    a_ub.reserve(m);
    for (int k = 0; k < m; ++k) {
        if (grid[k] <= 0.0) continue;  // I_G(0) <= I_F(0) is vacuous
        std::vector<double> row(m, 0.0);
        for (int j = 0; j < m && grid[j] < grid[k]; ++j)
            row[j] = grid[k] - grid[j];
        a_ub.push_back(std::move(row));
        b_ub.push_back(prior.rs_integral(grid[k]));
    }
    std::vector<std::vector<double>> a_eq{std::vector<double>(m, 1.0), grid};
    std::vector<double> b_eq{1.0, prior.mean()};

    const lp::LpResult res = lp::solve_lp(obj, a_ub, b_ub, a_eq, b_eq);
    if (res.status != lp::LpStatus::Optimal) {
        std::ostringstream os;
        os << "LP oracle internal failure (status "
           << int(res.status) << ", n=" << n << ")";
        throw LpInfeasible(os.str());
    }
    LpInnerSolution sol;
    sol.value = res.objective;
    sol.grid_size = m;
    sol.g = PosteriorDist::from_grid(grid, res.x);
    return sol;
}

double lower_support(const PosteriorDist& g) { return g.min_support(1e-9); }

}  // namespace disclosure
