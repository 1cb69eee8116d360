#include "disclosure/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

#include "disclosure/errors.hpp"
#include "disclosure/numerics.hpp"

namespace disclosure {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kAlphaGrid = 401;
constexpr double kRootTol = 1e-8;      // fixed-point residual target
constexpr double kBoundaryTol = 1e-6;  // accepted residual at a response jump
constexpr double kFamilyTol = 1e-7;    // |L-alpha| identifying a continuum

/// Deviation margin of the certified branch against the stay-silent tangent.
double tau_margin(const CostSpec& cost, double gamma, double x) {
    const double mu = cost.mu();
    const double kap = cost.kappa();
    return kap * cost.deriv_at(mu) * (mu - x) + mu - x + gamma +
           kap * cost.cost_at(x);
}

/// Deviation margin of the uncertified branch against the always-certify
/// tangent, with the off-path belief pinned at zero.
double psi_margin(const CostSpec& cost, double gamma, double x) {
    const double mu = cost.mu();
    const double kap = cost.kappa();
    return (1.0 - kap * cost.deriv_at(mu)) * (x - mu) + mu - gamma +
           kap * cost.cost_at(x);
}

/// Scan [lo, hi] on 2001 points for a root of fn (value <= 0 or a sign
/// change), refine by bisection, and report the minimum margin seen.
template <typename Fn>
NoLearnCheck scan_for_root(Fn&& fn, double lo, double hi) {
    NoLearnCheck chk;
    chk.holds = true;
    chk.worst_value = std::numeric_limits<double>::infinity();
    constexpr int kPts = 2001;
    const double step = (hi - lo) / (kPts - 1);
    double prev = kNaN;
    for (int i = 0; i < kPts; ++i) {
        const double x = (i == kPts - 1) ? hi : lo + i * step;
        const double v = fn(x);
        if (v < chk.worst_value) {
            chk.worst_value = v;
            chk.worst_at = x;
        }
        const bool crossing = i > 0 && (prev > 0.0) != (v > 0.0);
        if (chk.holds && (v <= 0.0 || crossing)) {
            chk.holds = false;
            if (crossing && v > 0.0) {
                chk.worst_at = num::bisect(fn, x - step, x, 1e-10);
                chk.worst_value = fn(chk.worst_at);
            } else {
                chk.worst_at = x;
                chk.worst_value = v;
            }
        }
        prev = v;
    }
    return chk;
}

struct ScanPoint {
    double alpha = 0.0;
    bool binary = false;
    double h = 0.0;  // L(alpha) - alpha, with L = mu on degenerate responses
    InnerKind kind = InnerKind::Degenerate;
};

ScanPoint probe(const Prior& prior, const CostSpec& cost, double gamma,
                double alpha) {
    ScanPoint p;
    p.alpha = alpha;
    const ResponseCore core =
        solve_inner_core(prior, ValueConfig(alpha, gamma, cost));
    const CandidateEval& best = core.best();
    p.kind = best.kind;
    p.binary = best.kind != InnerKind::Degenerate;
    p.h = (p.binary ? best.x_lo : prior.mean()) - alpha;
    return p;
}

double sender_value(const ValueConfig& cfg, const PosteriorDist& g) {
    double v = 0.0;
    for (const Atom& a : g.atoms()) v += a.w * value_at(cfg, a.x);
    return v;
}

double certified_mass(const PosteriorDist& g, double kink) {
    double m = 0.0;
    for (const Atom& a : g.atoms())
        if (a.x >= kink - 1e-12) m += a.w;
    return m;
}

Equilibrium build_learning(const Prior& prior, const CostSpec& cost,
                           double gamma, double alpha, bool at_boundary) {
    const ValueConfig cfg(alpha, gamma, cost);
    const InnerSolution sol = solve_inner(prior, cfg);
    Equilibrium eq;
    eq.alpha = alpha;
    eq.g = sol.g;
    eq.cert_threshold = cfg.kink();
    eq.cert_probability = certified_mass(sol.g, cfg.kink());
    eq.sender_payoff = sender_value(cfg, sol.g);
    eq.receiver_payoff = sol.g.variance() - prior.variance();
    eq.residual = std::fabs(lower_support(sol.g) - alpha);
    eq.certificate = sol.certificate;
    eq.at_boundary = at_boundary;
    eq.kind = sol.certificate.shape == CertShape::Affine
                  ? EqKind::BiPooling
                  : EqKind::MonotonePartitional;
    return eq;
}

Equilibrium build_no_learn_no_cert(const Prior& prior, const CostSpec& cost,
                                   double gamma) {
    const double mu = prior.mean();
    const ValueConfig cfg(mu, gamma, cost);
    Equilibrium eq;
    eq.kind = EqKind::NoLearnNoCert;
    eq.alpha = mu;
    eq.g = PosteriorDist::degenerate(mu);
    eq.cert_threshold = cfg.kink();
    eq.cert_probability = 0.0;
    eq.sender_payoff = mu;
    eq.receiver_payoff = -prior.variance();
    eq.residual = 0.0;
    eq.certificate = price_certificate(prior, cfg, eq.g);
    return eq;
}

Equilibrium build_no_learn_cert(const Prior& prior, const CostSpec& cost,
                                double gamma) {
    const double mu = prior.mean();
    const ValueConfig cfg(0.0, gamma, cost);
    Equilibrium eq;
    eq.kind = EqKind::NoLearnCert;
    eq.alpha = 0.0;  // off-path pessimism after the empty message
    eq.g = PosteriorDist::degenerate(mu);
    eq.cert_threshold = cfg.kink();
    eq.cert_probability = 1.0;
    eq.sender_payoff = mu - gamma;
    eq.receiver_payoff = -prior.variance();
    eq.residual = 0.0;
    eq.certificate = price_certificate(prior, cfg, eq.g);
    return eq;
}

/// Bisect h on a subinterval whose endpoint responses are both binary.
double bisect_fixed_point(const Prior& prior, const CostSpec& cost,
                          double gamma, double lo, double hi, double h_lo) {
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const ScanPoint p = probe(prior, cost, gamma, mid);
        if (std::fabs(p.h) <= kRootTol * 0.1) return mid;
        if ((p.h > 0.0) == (h_lo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Locate the alpha where the best-response family switches between
/// degenerate and binary, to within 1e-12.
double bisect_regime_edge(const Prior& prior, const CostSpec& cost,
                          double gamma, double lo, double hi, bool lo_binary) {
    for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (probe(prior, cost, gamma, mid).binary == lo_binary)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

bool family_member(const Prior& prior, const CostSpec& cost, double gamma,
                   double alpha) {
    const ScanPoint p = probe(prior, cost, gamma, alpha);
    return p.kind == InnerKind::BiPooling && std::fabs(p.h) <= kFamilyTol;
}

}  // namespace

const char* to_string(EqKind k) {
    switch (k) {
        case EqKind::MonotonePartitional: return "monotone_partitional";
        case EqKind::BiPooling: return "bi_pooling";
        case EqKind::NoLearnCert: return "no_learn_cert";
        case EqKind::NoLearnNoCert: return "no_learn_no_cert";
    }
    return "unknown";
}

const char* to_string(Region r) {
    switch (r) {
        case Region::A: return "A";
        case Region::B: return "B";
        case Region::C: return "C";
        case Region::D: return "D";
    }
    return "?";
}

NoLearnCheck check_no_learn_no_cert(const Prior& prior, const CostSpec& cost,
                                    double gamma) {
    const double mu = prior.mean();
    if (gamma >= 1.0 - mu) {
        NoLearnCheck chk;
        chk.holds = true;  // certification can never recoup the fee
        chk.worst_value = gamma - (1.0 - mu);
        chk.worst_at = 1.0;
        return chk;
    }
    return scan_for_root(
        [&](double x) { return tau_margin(cost, gamma, x); }, mu + gamma, 1.0);
}

NoLearnCheck check_no_learn_cert(const Prior& prior, const CostSpec& cost,
                                 double gamma) {
    const double mu = prior.mean();
    if (mu < gamma) {
        NoLearnCheck chk;
        chk.holds = false;  // certifying the mean already loses money
        chk.worst_value = mu - gamma;
        chk.worst_at = mu;
        return chk;
    }
    if (gamma <= 0.0) {
        NoLearnCheck chk;
        chk.holds = psi_margin(cost, 0.0, 0.0) > 0.0;
        chk.worst_value = psi_margin(cost, 0.0, 0.0);
        chk.worst_at = 0.0;
        return chk;
    }
    return scan_for_root(
        [&](double x) { return psi_margin(cost, gamma, x); }, 0.0, gamma);
}

double best_response_belief(const Prior& prior, const CostSpec& cost,
                            double gamma, double alpha) {
    return probe(prior, cost, gamma, alpha).h + alpha;
}

EquilibriumSet covert_equilibria(const Prior& prior, const CostSpec& cost,
                                 double gamma) {
    if (!(cost.kappa() > 0.0))
        throw std::invalid_argument(
            "covert_equilibria requires kappa > 0; use benchmark_kappa0 for "
            "free evidence");
    const double mu = prior.mean();
    EquilibriumSet set;

    if (check_no_learn_no_cert(prior, cost, gamma).holds)
        set.equilibria.push_back(build_no_learn_no_cert(prior, cost, gamma));
    if (check_no_learn_cert(prior, cost, gamma).holds)
        set.equilibria.push_back(build_no_learn_cert(prior, cost, gamma));

    std::vector<ScanPoint> pts;
    pts.reserve(kAlphaGrid);
    for (int i = 0; i < kAlphaGrid; ++i)
        pts.push_back(probe(prior, cost, gamma, mu * i / (kAlphaGrid - 1)));

    // Continuum detection: consecutive bi-pooling responses that are already
    // fixed points signal the knife-edge fee.
    int run_lo = -1, run_hi = -1;
    for (int i = 0; i < kAlphaGrid; ++i) {
        const bool member = pts[i].kind == InnerKind::BiPooling &&
                            std::fabs(pts[i].h) <= kFamilyTol;
        if (member) {
            if (run_lo < 0) run_lo = i;
            run_hi = i;
        }
    }
    double fam_lo = kNaN, fam_hi = kNaN;
    if (run_lo >= 0 && run_hi > run_lo) {
        fam_lo = pts[run_lo].alpha;
        if (run_lo > 0) {
            double lo = pts[run_lo - 1].alpha, hi = pts[run_lo].alpha;
            for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
                const double mid = 0.5 * (lo + hi);
                (family_member(prior, cost, gamma, mid) ? hi : lo) = mid;
            }
            fam_lo = hi;
        }
        fam_hi = pts[run_hi].alpha;
        if (run_hi < kAlphaGrid - 1) {
            double lo = pts[run_hi].alpha, hi = pts[run_hi + 1].alpha;
            for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
                const double mid = 0.5 * (lo + hi);
                (family_member(prior, cost, gamma, mid) ? lo : hi) = mid;
            }
            fam_hi = lo;
        }
        BiPoolingFamily fam;
        fam.alpha_lo = fam_lo;
        fam.alpha_hi = fam_hi;
        for (double q : {0.25, 0.5, 0.75}) {
            const double a = fam_lo + q * (fam_hi - fam_lo);
            Equilibrium eq = build_learning(prior, cost, gamma, a, false);
            eq.kind = EqKind::BiPooling;
            if (q == 0.5 && eq.g.support_size(1e-9) == 2)
                fam.support_gap =
                    eq.g.max_support(1e-9) - eq.g.min_support(1e-9);
            fam.samples.push_back(std::move(eq));
        }
        set.family = std::move(fam);
    }
    const auto in_family = [&](double a) {
        return set.family && a >= fam_lo - 1e-9 && a <= fam_hi + 1e-9;
    };

    // Isolated fixed points of L.
    std::vector<double> roots;
    auto add_root = [&](double a) {
        if (in_family(a)) return;
        for (double r : roots)
            if (std::fabs(r - a) <= 1e-6) return;
        roots.push_back(a);
    };
    std::vector<std::pair<double, bool>> found;  // (alpha, at_boundary)
    for (int i = 0; i < kAlphaGrid; ++i)
        if (pts[i].binary && std::fabs(pts[i].h) <= kRootTol)
            add_root(pts[i].alpha);
    for (int i = 0; i + 1 < kAlphaGrid; ++i) {
        const ScanPoint& a = pts[i];
        const ScanPoint& b = pts[i + 1];
        if (a.binary && b.binary) {
            if ((a.h > 0.0) != (b.h > 0.0))
                add_root(bisect_fixed_point(prior, cost, gamma, a.alpha,
                                            b.alpha, a.h));
            continue;
        }
        if (a.binary == b.binary) continue;
        // Regime-switch cell: probe interior points, then chase the jump.
        std::vector<ScanPoint> sub{a};
        for (int j = 1; j <= 10; ++j)
            sub.push_back(probe(prior, cost, gamma,
                                a.alpha + (b.alpha - a.alpha) * j / 11.0));
        sub.push_back(b);
        bool crossed = false;
        for (std::size_t j = 0; j + 1 < sub.size(); ++j) {
            if (sub[j].binary && sub[j + 1].binary &&
                (sub[j].h > 0.0) != (sub[j + 1].h > 0.0)) {
                add_root(bisect_fixed_point(prior, cost, gamma, sub[j].alpha,
                                            sub[j + 1].alpha, sub[j].h));
                crossed = true;
            }
        }
        if (crossed) continue;
        for (std::size_t j = 0; j + 1 < sub.size(); ++j) {
            if (sub[j].binary == sub[j + 1].binary) continue;
            const double edge = bisect_regime_edge(
                prior, cost, gamma, sub[j].alpha, sub[j + 1].alpha,
                sub[j].binary);
            // The binary side's residual at the jump decides whether the
            // discontinuity actually passes through a fixed point.
            const double eps = 1e-9;
            const double side =
                sub[j].binary ? std::max(0.0, edge - eps)
                              : std::min(mu, edge + eps);
            const ScanPoint at = probe(prior, cost, gamma, side);
            if (at.binary && std::fabs(at.h) <= kBoundaryTol &&
                !in_family(side)) {
                bool dup = false;
                for (double r : roots)
                    if (std::fabs(r - side) <= 1e-6) dup = true;
                if (!dup) found.emplace_back(side, true);
            }
        }
    }
    for (double r : roots) found.emplace_back(r, false);

    for (const auto& [a, boundary] : found) {
        Equilibrium eq = build_learning(prior, cost, gamma, a, boundary);
        if (eq.kind == EqKind::MonotonePartitional ||
            eq.kind == EqKind::BiPooling)
            set.equilibria.push_back(std::move(eq));
    }

    std::sort(set.equilibria.begin(), set.equilibria.end(),
              [](const Equilibrium& x, const Equilibrium& y) {
                  return x.alpha < y.alpha;
              });
    if (set.equilibria.empty() && !set.family)
        throw ExistenceViolation(
            "no covert equilibrium found; the solver violated guaranteed "
            "existence");
    return set;
}

Equilibrium overt_equilibrium(const Prior& prior, const CostSpec& cost,
                              double gamma) {
    if (!(cost.kappa() > 0.0))
        throw std::invalid_argument("overt_equilibrium requires kappa > 0");
    return build_no_learn_no_cert(prior, cost, gamma);
}

Kappa0Benchmark benchmark_kappa0(const Prior& prior, double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("benchmark_kappa0 requires gamma >= 0");
    const double mu = prior.mean();
    Kappa0Benchmark b;
    if (gamma >= 1.0 - mu) {
        b.no_certification = true;
        b.x_star = 1.0;
        b.alpha = mu;
        b.worst_g = PosteriorDist::degenerate(mu);
        b.sender_payoff = mu;
        b.receiver_payoff_worst = -prior.variance();
        b.receiver_payoff_best = -prior.variance();
        return b;
    }
    double x_star = 0.0;
    if (gamma > 0.0) {
        const double lo = prior.quantile(1e-10);
        if (xi(prior, lo) >= gamma)
            x_star = lo;  // fee small enough that everything certifies
        else
            x_star = num::bisect(
                [&](double x) { return xi(prior, x) - gamma; }, lo, 1.0, 1e-13);
    }
    b.x_star = x_star;
    b.alpha = std::max(0.0, x_star - gamma);
    const double fx = prior.cdf(x_star);
    const double hi_mean = fx < 1.0 - 1e-12
                               ? cond_mean_above(prior, x_star)
                               : mu;
    if (fx > 1e-12)
        b.worst_g = PosteriorDist::from_atoms(
            {Atom{b.alpha, fx}, Atom{hi_mean, 1.0 - fx}});
    else
        b.worst_g = PosteriorDist::degenerate(hi_mean);
    b.sender_payoff = fx * b.alpha + (1.0 - fx) * (hi_mean - gamma);
    b.receiver_payoff_worst = b.worst_g.variance() - prior.variance();
    // Receiver-best outcome: exact disclosure above x_star, one pool below,
    // so the only residual uncertainty is the truncated prior's variance.
    if (fx > 1e-12) {
        const double m1 = prior.partial_mean(x_star) / fx;
        const double m2 = num::adaptive_simpson(
                              [&](double t) { return t * t * prior.density(t); },
                              0.0, x_star, 1e-12) /
                          fx;
        b.receiver_payoff_best = -fx * std::max(0.0, m2 - m1 * m1);
    } else {
        b.receiver_payoff_best = 0.0;
    }
    return b;
}

KappaLimitReport kappa_limit(const Prior& prior, const CostSpec& cost,
                             double gamma, const std::vector<double>& kappas) {
    const double mu = prior.mean();
    if (!(gamma > 0.0 && gamma < 1.0 - mu))
        throw std::invalid_argument("kappa_limit requires gamma in (0, 1-mu)");
    if (kappas.empty())
        throw std::invalid_argument("kappa_limit requires a kappa schedule");
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        if (!(kappas[i] > 0.0))
            throw std::invalid_argument("kappa_limit requires kappa > 0");
        if (i > 0 && !(kappas[i] < kappas[i - 1]))
            throw std::invalid_argument(
                "kappa_limit requires a strictly decreasing schedule");
    }
    KappaLimitReport rep;
    rep.benchmark = benchmark_kappa0(prior, gamma);
    const double t_lo = rep.benchmark.alpha;
    const double t_hi = rep.benchmark.worst_g.max_support(1e-12);

    for (double kap : kappas) {
        KappaLimitRow row;
        row.kappa = kap;
        const EquilibriumSet set =
            covert_equilibria(prior, cost.with_kappa(kap), gamma);
        const Equilibrium* pick = nullptr;
        double worst = -1.0;
        auto consider = [&](const Equilibrium& eq) {
            if (eq.kind != EqKind::MonotonePartitional &&
                eq.kind != EqKind::BiPooling)
                return;
            const double d =
                std::max(std::fabs(eq.g.min_support(1e-9) - t_lo),
                         std::fabs(eq.g.max_support(1e-9) - t_hi));
            if (d > worst) {
                worst = d;
                pick = &eq;
            }
        };
        for (const Equilibrium& eq : set.equilibria) consider(eq);
        if (set.family)
            for (const Equilibrium& eq : set.family->samples) consider(eq);
        if (pick != nullptr) {
            row.has_learning = true;
            row.alpha = pick->alpha;
            row.g = pick->g;
            row.distance = worst;
        } else {
            row.alpha = kNaN;
            row.distance = kNaN;
        }
        rep.rows.push_back(std::move(row));
    }
    rep.distances_decreasing = true;
    const KappaLimitRow* prev = nullptr;
    for (const KappaLimitRow& r : rep.rows) {
        if (!r.has_learning) continue;
        if (prev != nullptr && !(r.distance < prev->distance))
            rep.distances_decreasing = false;
        prev = &r;
    }
    return rep;
}

RegionCell region_classify(const Prior& prior, const CostSpec& cost_template,
                           double kappa, double gamma) {
    RegionCell cell;
    cell.kappa = kappa;
    cell.gamma = gamma;
    const EquilibriumSet set =
        covert_equilibria(prior, cost_template.with_kappa(kappa), gamma);
    bool learning = set.family.has_value();
    bool nlnc = false, nlc = false;
    for (const Equilibrium& eq : set.equilibria) {
        switch (eq.kind) {
            case EqKind::MonotonePartitional:
            case EqKind::BiPooling: learning = true; break;
            case EqKind::NoLearnNoCert: nlnc = true; break;
            case EqKind::NoLearnCert: nlc = true; break;
        }
    }
    cell.n_equilibria =
        int(set.equilibria.size()) + (set.family.has_value() ? 1 : 0);
    if (learning)
        cell.region = Region::D;
    else if (nlnc && nlc)
        cell.region = Region::C;
    else if (nlc)
        cell.region = Region::B;
    else
        cell.region = Region::A;
    return cell;
}

std::vector<RegionCell> region_map(const Prior& prior,
                                   const CostSpec& cost_template,
                                   const std::vector<double>& kappas,
                                   const std::vector<double>& gammas) {
    std::vector<RegionCell> cells(kappas.size() * gammas.size());
    const std::size_t total = cells.size();
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const std::size_t i = idx / gammas.size();
            const std::size_t j = idx % gammas.size();
            cells[idx] = region_classify(prior, cost_template, kappas[i],
                                         gammas[j]);
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (hw == 1 || total < 2) {
        fill(0, total);
        return cells;
    }
    const std::size_t chunk = (total + hw - 1) / hw;
    std::vector<std::future<void>> futs;
    for (std::size_t begin = 0; begin < total; begin += chunk)
        futs.push_back(std::async(std::launch::async, fill, begin,
                                  std::min(begin + chunk, total)));
    for (auto& f : futs) f.get();
    return cells;
}

}  // namespace disclosure
