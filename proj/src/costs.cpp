#include "disclosure/costs.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "disclosure/errors.hpp"

namespace disclosure {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

CostSpec CostSpec::quadratic(double mu, double kappa) {
    require(mu > 0.0 && mu < 1.0, "cost mu must lie in (0,1)");
    require(kappa >= 0.0 && std::isfinite(kappa), "kappa must be nonnegative");
    CostSpec c;
    c.kind_ = CostKind::Quadratic;
    c.mu_ = mu;
    c.kappa_ = kappa;
    c.coeffs_ = {0.0, 0.0, 1.0};
    validate_cost(c);
    return c;
}

CostSpec CostSpec::quad_quartic_blend(double a, double b, double mu, double kappa) {
    require(a > 0.0, "blend requires a > 0 (strict convexity at the mean)");
    require(b >= 0.0, "blend requires b >= 0");
    require(mu > 0.0 && mu < 1.0, "cost mu must lie in (0,1)");
    require(kappa >= 0.0 && std::isfinite(kappa), "kappa must be nonnegative");
    CostSpec c;
    c.kind_ = CostKind::QuadQuarticBlend;
    c.mu_ = mu;
    c.kappa_ = kappa;
    c.blend_a_ = a;
    c.blend_b_ = b;
    c.coeffs_ = {0.0, 0.0, a, 0.0, b};
    validate_cost(c);
    return c;
}

CostSpec CostSpec::polynomial(std::vector<double> coeffs, double mu, double kappa) {
    require(!coeffs.empty(), "polynomial cost needs coefficients");
    require(mu > 0.0 && mu < 1.0, "cost mu must lie in (0,1)");
    require(kappa >= 0.0 && std::isfinite(kappa), "kappa must be nonnegative");
    CostSpec c;
    c.kind_ = CostKind::Polynomial;
    c.mu_ = mu;
    c.kappa_ = kappa;
    c.coeffs_ = std::move(coeffs);
    validate_cost(c);
    return c;
}

double CostSpec::cost_at(double x) const {
    const double u = x - mu_;
    double v = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * u + coeffs_[k];
    return v;
}

double CostSpec::deriv_at(double x) const {
    const double u = x - mu_;
    double v = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 1;) v = v * u + double(k) * coeffs_[k];
    return v;
}

double CostSpec::second_deriv_at(double x) const {
    const double u = x - mu_;
    double v = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 2;)
        v = v * u + double(k) * double(k - 1) * coeffs_[k];
    return v;
}

CostSpec CostSpec::with_kappa(double kappa) const {
    require(kappa >= 0.0 && std::isfinite(kappa), "kappa must be nonnegative");
    CostSpec c = *this;
    c.kappa_ = kappa;
    return c;
}

double total_cost(const CostSpec& spec, const PosteriorDist& g) {
    double s = 0.0;
    for (const Atom& a : g.atoms()) s += a.w * spec.cost_at(a.x);
    return spec.kappa() * s;
}

CostDiagnostic validate_cost(const CostSpec& spec) {
    CostDiagnostic d;
    d.at_mu = std::fabs(spec.cost_at(spec.mu()));
    d.worst_convexity = std::numeric_limits<double>::infinity();
    d.min_value = std::numeric_limits<double>::infinity();
    constexpr int kGrid = 1000;
    for (int i = 0; i <= kGrid; ++i) {
        const double x = double(i) / kGrid;
        const double c = spec.cost_at(x);
        const double c2 = spec.second_deriv_at(x);
        if (!std::isfinite(c) || !std::isfinite(c2))
            throw InvalidCost("cost unbounded on the check grid");
        d.worst_convexity = std::min(d.worst_convexity, c2);
        d.min_value = std::min(d.min_value, c);
    }
    d.pass = d.at_mu <= 1e-12 && d.worst_convexity > 0.0 && d.min_value >= -1e-12;
    if (!d.pass) {
        std::ostringstream os;
        os << "invalid cost: |c(mu)|=" << d.at_mu
           << ", min c''=" << d.worst_convexity << ", min c=" << d.min_value;
        throw InvalidCost(os.str());
    }
    return d;
}

}  // namespace disclosure
