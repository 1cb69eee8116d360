#include "disclosure/dist.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "disclosure/errors.hpp"
#include "disclosure/numerics.hpp"

namespace disclosure {

namespace {

constexpr double kMassEps = 1e-12;  // truncation mass below this is degenerate

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

/// Regularized incomplete beta for integer parameters:
/// I_x(a,b) = sum_{j=a}^{n} C(n,j) x^j (1-x)^{n-j} with n = a+b-1.
double ibeta_int(int a, int b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const int n = a + b - 1;
    double s = 0.0;
    for (int j = a; j <= n; ++j)
        s += binom(n, j) * std::pow(x, j) * std::pow(1.0 - x, n - j);
    return std::min(1.0, std::max(0.0, s));
}

}  // namespace

Prior Prior::uniform() {
    Prior p;
    p.family_ = PriorFamily::Uniform;
    p.finalize();
    return p;
}

Prior Prior::beta(double a, double b) {
    if (!(a >= 1.0) || !(b >= 1.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("Prior::beta requires a >= 1 and b >= 1");
    Prior p;
    p.family_ = PriorFamily::Beta;
    p.a_ = a;
    p.b_ = b;
    const double ra = std::round(a), rb = std::round(b);
    p.beta_int_ = std::fabs(a - ra) < 1e-12 && std::fabs(b - rb) < 1e-12 &&
                  ra + rb <= 40.0;
    p.ia_ = int(ra);
    p.ib_ = int(rb);
    p.beta_norm_ = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b));
    p.finalize();
    return p;
}

Prior Prior::piecewise_linear(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2)
        throw std::invalid_argument("piecewise prior needs at least two knots");
    if (std::fabs(knots.front().first) > 1e-12 ||
        std::fabs(knots.front().second) > 1e-12 ||
        std::fabs(knots.back().first - 1.0) > 1e-12 ||
        std::fabs(knots.back().second - 1.0) > 1e-12)
        throw std::invalid_argument("piecewise knots must start at (0,0) and end at (1,1)");
    knots.front() = {0.0, 0.0};
    knots.back() = {1.0, 1.0};
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i].first > knots[i - 1].first) ||
            !(knots[i].second > knots[i - 1].second))
            throw std::invalid_argument(
                "piecewise knots must be strictly increasing in x and in cdf "
                "(zero-density segments are not allowed)");
    }
    Prior p;
    p.family_ = PriorFamily::PiecewiseLinear;
    p.knots_ = std::move(knots);
    const std::size_t k = p.knots_.size();
    p.seg_density_.resize(k - 1);
    p.seg_partial_mean_.assign(k, 0.0);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const auto [x0, f0] = p.knots_[i];
        const auto [x1, f1] = p.knots_[i + 1];
        p.seg_density_[i] = (f1 - f0) / (x1 - x0);
        p.seg_partial_mean_[i + 1] =
            p.seg_partial_mean_[i] + p.seg_density_[i] * (x1 * x1 - x0 * x0) / 2.0;
    }
    p.finalize();
    return p;
}

void Prior::finalize() {
    switch (family_) {
        case PriorFamily::Uniform:
            mean_ = 0.5;
            var_ = 1.0 / 12.0;
            break;
        case PriorFamily::Beta: {
            mean_ = a_ / (a_ + b_);
            var_ = a_ * b_ / ((a_ + b_) * (a_ + b_) * (a_ + b_ + 1.0));
            break;
        }
        case PriorFamily::PiecewiseLinear: {
            mean_ = seg_partial_mean_.back();
            double ex2 = 0.0;
            for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
                const double x0 = knots_[i].first, x1 = knots_[i + 1].first;
                ex2 += seg_density_[i] * (x1 * x1 * x1 - x0 * x0 * x0) / 3.0;
            }
            var_ = ex2 - mean_ * mean_;
            break;
        }
    }
    // Verify the cached mean against quadrature of x*f(x).  Integrate per
    // knot segment for piecewise priors so the step density never straddles
    // a Simpson panel.
    double q = 0.0;
    auto integrand = [this](double s) { return s * density(s); };
    if (family_ == PriorFamily::PiecewiseLinear) {
        for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
            q += num::adaptive_simpson(integrand, knots_[i].first,
                                       knots_[i + 1].first, 1e-11);
    } else {
        q = num::adaptive_simpson(integrand, 0.0, 1.0, 1e-11);
    }
    if (std::fabs(q - mean_) > 1e-10) {
        std::ostringstream os;
        os << "prior mean check failed: cached " << mean_ << " vs quadrature " << q;
        throw SolverError(os.str());
    }
    if (!(mean_ > 0.0 && mean_ < 1.0))
        throw std::invalid_argument("prior mean must lie strictly inside (0,1)");
    lc_ = check_logconcave(*this, 1000);
}

double Prior::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    switch (family_) {
        case PriorFamily::Uniform:
            return x;
        case PriorFamily::Beta:
            return beta_int_ ? ibeta_int(ia_, ib_, x)
                             : boost::math::ibeta(a_, b_, x);
        case PriorFamily::PiecewiseLinear: {
            const auto it = std::upper_bound(
                knots_.begin(), knots_.end(), x,
                [](double v, const std::pair<double, double>& kn) { return v < kn.first; });
            const std::size_t i = std::size_t(it - knots_.begin()) - 1;
            return knots_[i].second + seg_density_[i] * (x - knots_[i].first);
        }
    }
    return 0.0;
}

double Prior::density(double x) const {
    x = clamp01(x);
    switch (family_) {
        case PriorFamily::Uniform:
            return 1.0;
        case PriorFamily::Beta: {
            const double lo = (a_ > 1.0 && x == 0.0) ? 0.0 : 1.0;
            const double hi = (b_ > 1.0 && x == 1.0) ? 0.0 : 1.0;
            if (lo == 0.0 || hi == 0.0) return 0.0;
            return beta_norm_ * std::pow(x, a_ - 1.0) * std::pow(1.0 - x, b_ - 1.0);
        }
        case PriorFamily::PiecewiseLinear: {
            if (x >= 1.0) return seg_density_.back();
            const auto it = std::upper_bound(
                knots_.begin(), knots_.end(), x,
                [](double v, const std::pair<double, double>& kn) { return v < kn.first; });
            const std::size_t i = std::size_t(it - knots_.begin()) - 1;
            return seg_density_[i];
        }
    }
    return 0.0;
}

double Prior::partial_mean(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return mean_;
    switch (family_) {
        case PriorFamily::Uniform:
            return 0.5 * x * x;
        case PriorFamily::Beta:
            // ∫₀ˣ s f_{a,b}(s) ds = mu * I_x(a+1, b)
            return mean_ * (beta_int_ ? ibeta_int(ia_ + 1, ib_, x)
                                      : boost::math::ibeta(a_ + 1.0, b_, x));
        case PriorFamily::PiecewiseLinear: {
            const auto it = std::upper_bound(
                knots_.begin(), knots_.end(), x,
                [](double v, const std::pair<double, double>& kn) { return v < kn.first; });
            const std::size_t i = std::size_t(it - knots_.begin()) - 1;
            const double x0 = knots_[i].first;
            return seg_partial_mean_[i] + seg_density_[i] * (x * x - x0 * x0) / 2.0;
        }
    }
    return 0.0;
}

double Prior::rs_integral(double x) const {
    x = clamp01(x);
    return x * cdf(x) - partial_mean(x);
}

double Prior::quantile(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    switch (family_) {
        case PriorFamily::Uniform:
            return p;
        case PriorFamily::Beta: {
            double lo = 0.0, hi = 1.0;
            for (int i = 0; i < 100 && hi - lo > 1e-14; ++i) {
                const double mid = 0.5 * (lo + hi);
                (cdf(mid) < p ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        case PriorFamily::PiecewiseLinear: {
            const auto it = std::upper_bound(
                knots_.begin(), knots_.end(), p,
                [](double v, const std::pair<double, double>& kn) { return v < kn.second; });
            const std::size_t i = std::size_t(it - knots_.begin()) - 1;
            return knots_[i].first + (p - knots_[i].second) / seg_density_[i];
        }
    }
    return p;
}

double cond_mean_below(const Prior& prior, double t) {
    t = clamp01(t);
    const double mass = prior.cdf(t);
    if (mass < kMassEps)
        throw DegenerateTruncation("cond_mean_below: vanishing mass below t");
    const double v = prior.partial_mean(t) / mass;
    return std::min(t, std::max(0.0, v));
}

double cond_mean_above(const Prior& prior, double t) {
    t = clamp01(t);
    const double mass = 1.0 - prior.cdf(t);
    if (mass < kMassEps)
        throw DegenerateTruncation("cond_mean_above: vanishing mass above t");
    const double v = (prior.mean() - prior.partial_mean(t)) / mass;
    return std::max(t, std::min(1.0, v));
}

double xi(const Prior& prior, double x) { return x - cond_mean_below(prior, x); }

LogConcavityReport check_logconcave(const Prior& prior, int gridsize) {
    if (gridsize < 10) throw std::invalid_argument("check_logconcave: gridsize < 10");
    LogConcavityReport rep;
    rep.worst_second_difference = -std::numeric_limits<double>::infinity();
    const int n = gridsize;
    double prev2 = 0.0, prev1 = 0.0;
    for (int i = 1; i < n; ++i) {
        const double x = double(i) / n;
        const double s = std::log(prior.cdf(x));
        if (i >= 3) {
            const double d2 = s - 2.0 * prev1 + prev2;
            if (d2 > rep.worst_second_difference) {
                rep.worst_second_difference = d2;
                rep.at = double(i - 1) / n;
            }
        }
        prev2 = prev1;
        prev1 = s;
    }
    rep.pass = rep.worst_second_difference <= 1e-9;
    return rep;
}

PosteriorDist PosteriorDist::degenerate(double x) {
    return from_atoms({Atom{x, 1.0}});
}

PosteriorDist PosteriorDist::from_atoms(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& l, const Atom& r) { return l.x < r.x; });
    PosteriorDist g;
    double sum = 0.0;
    for (const Atom& a : atoms) {
        if (!(a.w >= -1e-12) || !std::isfinite(a.w) || !std::isfinite(a.x))
            throw std::invalid_argument("atom weights must be nonnegative and finite");
        if (a.x < -1e-12 || a.x > 1.0 + 1e-12)
            throw std::invalid_argument("atom locations must lie in [0,1]");
        const double w = std::max(0.0, a.w);
        if (w == 0.0) continue;
        const double x = clamp01(a.x);
        sum += w;
        if (!g.atoms_.empty() && x - g.atoms_.back().x < 1e-14)
            g.atoms_.back().w += w;  // merge coincident locations
        else
            g.atoms_.push_back({x, w});
    }
    if (g.atoms_.empty()) throw std::invalid_argument("empty posterior distribution");
    if (std::fabs(sum - 1.0) > 1e-10)
        throw std::invalid_argument("posterior weights must sum to 1 within 1e-10");
    double m = 0.0;
    for (Atom& a : g.atoms_) {
        a.w /= sum;
        m += a.w * a.x;
    }
    g.mean_ = m;
    g.build_cumulative();
    return g;
}

PosteriorDist PosteriorDist::from_grid(const std::vector<double>& locations,
                                       const std::vector<double>& weights) {
    if (locations.size() != weights.size() || locations.empty())
        throw std::invalid_argument("grid locations/weights size mismatch");
    PosteriorDist g;
    g.grid_ = true;
    g.atoms_.reserve(locations.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < locations.size(); ++i) {
        if (i > 0 && !(locations[i] > locations[i - 1]))
            throw std::invalid_argument("grid locations must be strictly increasing");
        if (locations[i] < -1e-12 || locations[i] > 1.0 + 1e-12)
            throw std::invalid_argument("grid locations must lie in [0,1]");
        if (weights[i] < -1e-9)
            throw std::invalid_argument("grid weights must be nonnegative");
        const double w = std::max(0.0, weights[i]);
        sum += w;
        g.atoms_.push_back({clamp01(locations[i]), w});
    }
    if (std::fabs(sum - 1.0) > 1e-10)
        throw std::invalid_argument("grid weights must sum to 1 within 1e-10");
    double m = 0.0;
    for (Atom& a : g.atoms_) {
        a.w /= sum;
        m += a.w * a.x;
    }
    g.mean_ = m;
    g.build_cumulative();
    return g;
}

void PosteriorDist::build_cumulative() {
    cum_w_.resize(atoms_.size());
    cum_wx_.resize(atoms_.size());
    double w = 0.0, wx = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        w += atoms_[i].w;
        wx += atoms_[i].w * atoms_[i].x;
        cum_w_[i] = w;
        cum_wx_[i] = wx;
    }
}

double PosteriorDist::rs_integral(double x) const {
    // Last atom with location <= x, then I_G(x) = x*W - S on the prefix.
    const auto it = std::upper_bound(
        atoms_.begin(), atoms_.end(), x,
        [](double v, const Atom& a) { return v < a.x; });
    if (it == atoms_.begin()) return 0.0;
    const std::size_t i = std::size_t(it - atoms_.begin()) - 1;
    return x * cum_w_[i] - cum_wx_[i];
}

double PosteriorDist::variance() const {
    double ex2 = 0.0;
    for (const Atom& a : atoms_) ex2 += a.w * a.x * a.x;
    return std::max(0.0, ex2 - mean_ * mean_);
}

double PosteriorDist::min_support(double weight_tol) const {
    for (const Atom& a : atoms_)
        if (a.w > weight_tol) return a.x;
    return atoms_.front().x;
}

double PosteriorDist::max_support(double weight_tol) const {
    for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it)
        if (it->w > weight_tol) return it->x;
    return atoms_.back().x;
}

std::size_t PosteriorDist::support_size(double weight_tol) const {
    std::size_t n = 0;
    for (const Atom& a : atoms_)
        if (a.w > weight_tol) ++n;
    return n;
}

bool PosteriorDist::is_degenerate(double weight_tol) const {
    return support_size(weight_tol) <= 1;
}

double rs_integral(const PosteriorDist& g, double x) { return g.rs_integral(x); }

MpcReport mpc_feasible(const PosteriorDist& g, const Prior& prior, double tol) {
    const double dm = g.mean() - prior.mean();
    if (std::fabs(dm) > tol) {
        std::ostringstream os;
        os << "mean mismatch: posterior " << g.mean() << " vs prior " << prior.mean();
        throw MeanMismatch(os.str());
    }
    MpcReport rep;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    auto probe = [&](double x) {
        const double slack = prior.rs_integral(x) - g.rs_integral(x);
        if (slack < rep.worst_slack) {
            rep.worst_slack = slack;
            rep.worst_at = x;
        }
    };
    constexpr int kCheckpoints = 2001;
    for (int k = 0; k < kCheckpoints; ++k) probe(double(k) / (kCheckpoints - 1));
    for (const Atom& a : g.atoms()) probe(a.x);
    rep.feasible = rep.worst_slack >= -tol;
    return rep;
}

double binary_mpc_slack(const Prior& prior, double x_lo, double x_hi,
                        double w_lo) {
    assert(x_lo <= x_hi);
    double q;
    if (w_lo <= 0.0)
        q = x_lo;
    else if (w_lo >= 1.0)
        q = x_hi;
    else
        q = std::min(x_hi, std::max(x_lo, prior.quantile(w_lo)));
    return prior.rs_integral(q) - w_lo * (q - x_lo);
}

}  // namespace disclosure
