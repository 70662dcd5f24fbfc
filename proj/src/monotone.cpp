#include "qlab/monotone.hpp"

#include "qlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0; }

void validate(const PowerSpec& s) {
    if (!(s.c > 0) || !std::isfinite(s.c) || !(s.alpha > 0) || !std::isfinite(s.alpha))
        throw std::invalid_argument("power map: need c > 0 and alpha > 0");
}

void validate(const ExpPowerSpec& s) {
    if (!(s.alpha > 0) || !(s.beta > 0) || !std::isfinite(s.alpha) || !std::isfinite(s.beta))
        throw std::invalid_argument("exp_power map: need alpha > 0 and beta > 0");
    if (!finite_nonneg(s.tau0))
        throw std::invalid_argument("exp_power map: need tau0 >= 0");
}

void validate(const AffineSpec& s) {
    if (!finite_nonneg(s.a) || !finite_nonneg(s.b))
        throw std::invalid_argument("affine map: need a >= 0 and b >= 0");
}

void validate(const PwlSpec& s) {
    if (s.t.empty() || s.t.size() != s.v.size())
        throw std::invalid_argument("pwl map: knot abscissae and values must be non-empty and equal-sized");
    for (size_t i = 0; i < s.t.size(); ++i) {
        if (!finite_nonneg(s.t[i]))
            throw std::invalid_argument("pwl map: knot abscissae must be finite and >= 0");
        if (!finite_nonneg(s.v[i]))
            throw std::invalid_argument("pwl map: knot values must be finite and >= 0");
        if (i > 0 && !(s.t[i] > s.t[i - 1]))
            throw std::invalid_argument("pwl map: knot abscissae must be strictly increasing");
        if (i > 0 && s.v[i] < s.v[i - 1])
            throw std::invalid_argument("pwl map: knot values must be non-decreasing");
    }
    if (!(s.blowup > s.t.back()))
        throw std::invalid_argument("pwl map: blow-up knot must lie beyond the last knot");
}

double pwl_last_slope(const PwlSpec& s) {
    if (s.step || s.t.size() < 2)
        return 0.0;
    const size_t n = s.t.size();
    return (s.v[n - 1] - s.v[n - 2]) / (s.t[n - 1] - s.t[n - 2]);
}

double pwl_value(const PwlSpec& s, double t) {
    if (t >= s.blowup)
        return kInf;
    if (std::isinf(t))
        return pwl_last_slope(s) > 0 ? kInf : s.v.back();
    if (t <= s.t.front())
        return s.v.front();
    if (t >= s.t.back()) {
        const double slope = pwl_last_slope(s);
        return slope > 0 ? s.v.back() + slope * (t - s.t.back()) : s.v.back();
    }
    const auto it = std::upper_bound(s.t.begin(), s.t.end(), t);
    const size_t i = static_cast<size_t>(it - s.t.begin()); // t[i-1] <= t < t[i]
    if (s.step)
        return s.v[i - 1];
    const double w = (t - s.t[i - 1]) / (s.t[i] - s.t[i - 1]);
    return s.v[i - 1] + w * (s.v[i] - s.v[i - 1]);
}

// inf{ t : pwl(t) >= tau }
double pwl_inverse(const PwlSpec& s, double tau) {
    if (tau <= s.v.front())
        return 0.0;
    const double slope = pwl_last_slope(s);
    const bool has_blowup = std::isfinite(s.blowup);
    const auto it = std::lower_bound(s.v.begin(), s.v.end(), tau);
    if (it == s.v.end()) {
        // Value never reached on the table; maybe on the extension.
        if (std::isinf(tau))
            return has_blowup ? s.blowup : kInf;
        double ext = kInf;
        if (slope > 0)
            ext = s.t.back() + (tau - s.v.back()) / slope;
        return has_blowup ? std::min(ext, s.blowup) : ext;
    }
    const size_t i = static_cast<size_t>(it - s.v.begin());
    if (s.step || i == 0)
        return s.t[i];
    // v[i-1] < tau <= v[i] after lower_bound, so the segment is rising.
    const double w = (tau - s.v[i - 1]) / (s.v[i] - s.v[i - 1]);
    return s.t[i - 1] + w * (s.t[i] - s.t[i - 1]);
}

double pwl_zero_plateau_end(const PwlSpec& s) {
    if (s.v.front() > 0)
        return 0.0;
    size_t j = 0;
    while (j < s.v.size() && s.v[j] == 0)
        ++j;
    if (j < s.v.size())
        return s.step ? s.t[j] : s.t[j - 1];
    // whole table is zero
    if (pwl_last_slope(s) > 0)
        return s.t.back();
    return std::isfinite(s.blowup) ? s.blowup : kInf;
}

} // namespace

MonotoneMap::MonotoneMap(std::variant<PowerSpec, ExpPowerSpec, AffineSpec, PwlSpec> spec)
    : spec_(std::move(spec)) {
    std::visit([](const auto& s) { validate(s); }, spec_);
}

MonotoneMap::MonotoneMap() : spec_(PowerSpec{1, 1}) {}

MonotoneMap MonotoneMap::power(double c, double alpha) { return MonotoneMap{PowerSpec{c, alpha}}; }
MonotoneMap MonotoneMap::exp_power(double alpha, double beta, double tau0) {
    return MonotoneMap{ExpPowerSpec{alpha, beta, tau0}};
}
MonotoneMap MonotoneMap::affine(double a, double b) { return MonotoneMap{AffineSpec{a, b}}; }
MonotoneMap MonotoneMap::pwl(PwlSpec spec) { return MonotoneMap{std::move(spec)}; }

MapFamily MonotoneMap::family() const {
    switch (spec_.index()) {
    case 0: return MapFamily::Power;
    case 1: return MapFamily::ExpPower;
    case 2: return MapFamily::Affine;
    default: return MapFamily::Pwl;
    }
}

double MonotoneMap::raw_value(double t) const {
    const double u = inner_power_ == 1 ? t : std::pow(t, inner_power_);
    if (const auto* p = std::get_if<PowerSpec>(&spec_))
        return p->c * std::pow(u, p->alpha);
    if (const auto* e = std::get_if<ExpPowerSpec>(&spec_)) {
        const double w = e->alpha * std::pow(u, e->beta);
        if (w > 700)
            return kInf;
        return std::expm1(w) + e->tau0;
    }
    if (const auto* a = std::get_if<AffineSpec>(&spec_)) {
        if (a->a == 0)
            return a->b;
        return a->a * u + a->b;
    }
    return pwl_value(std::get<PwlSpec>(spec_), u);
}

double MonotoneMap::operator()(double t) const {
    if (std::isnan(t) || t < 0)
        throw std::invalid_argument("MonotoneMap: argument must be in [0, inf]");
    const double raw = raw_value(t);
    if (!identity_floor_)
        return raw;
    return t < 1 ? t : std::max(raw, t);
}

double MonotoneMap::value_at_inf() const { return (*this)(kInf); }

double MonotoneMap::raw_inverse(double tau) const {
    double u;
    if (const auto* p = std::get_if<PowerSpec>(&spec_)) {
        u = tau <= 0 ? 0.0 : std::pow(tau / p->c, 1.0 / p->alpha);
    } else if (const auto* e = std::get_if<ExpPowerSpec>(&spec_)) {
        if (tau <= e->tau0)
            u = 0.0;
        else if (std::isinf(tau))
            u = kInf;
        else
            u = std::pow(std::log1p(tau - e->tau0) / e->alpha, 1.0 / e->beta);
    } else if (const auto* a = std::get_if<AffineSpec>(&spec_)) {
        if (a->a == 0)
            u = tau <= a->b ? 0.0 : kInf;
        else
            u = tau <= a->b ? 0.0 : (tau - a->b) / a->a;
    } else {
        u = pwl_inverse(std::get<PwlSpec>(spec_), tau);
    }
    return inner_power_ == 1 ? u : std::pow(u, 1.0 / inner_power_);
}

double MonotoneMap::inverse(double tau) const {
    if (std::isnan(tau) || tau < 0)
        throw std::invalid_argument("MonotoneMap: inverse argument must be in [0, inf]");
    if (!identity_floor_)
        return raw_inverse(tau);
    if (tau < 1)
        return tau;
    return std::max(1.0, std::min(tau, raw_inverse(tau)));
}

double MonotoneMap::raw_inverse_at_exp(double eta) const {
    if (const auto* p = std::get_if<PowerSpec>(&spec_))
        return std::exp((eta - std::log(p->c)) / (p->alpha * inner_power_));
    if (const auto* e = std::get_if<ExpPowerSpec>(&spec_)) {
        double logt; // log(tau + 1 - tau0) for tau = e^eta
        if (eta >= 36)
            logt = eta + std::log1p((1.0 - e->tau0) * std::exp(-eta));
        else {
            const double tau = std::exp(eta);
            if (tau <= e->tau0)
                return 0.0;
            logt = std::log1p(tau - e->tau0);
        }
        return std::pow(logt / e->alpha, 1.0 / (e->beta * inner_power_));
    }
    if (const auto* a = std::get_if<AffineSpec>(&spec_)) {
        if (a->a == 0)
            return eta <= std::log(a->b) ? 0.0 : kInf;
        double u;
        if (eta > 690)
            u = std::exp(eta - std::log(a->a));
        else
            u = std::max(0.0, (std::exp(eta) - a->b) / a->a);
        return inner_power_ == 1 ? u : std::pow(u, 1.0 / inner_power_);
    }
    const auto& s = std::get<PwlSpec>(spec_);
    const double slope = pwl_last_slope(s);
    if (eta > 690 && slope > 0 && !std::isfinite(s.blowup))
        return std::exp((eta - std::log(slope)) / inner_power_);
    const double u = pwl_inverse(s, std::exp(eta));
    return inner_power_ == 1 ? u : std::pow(u, 1.0 / inner_power_);
}

double MonotoneMap::inverse_at_exp(double eta) const {
    if (!identity_floor_)
        return raw_inverse_at_exp(eta);
    if (eta < 0)
        return std::exp(eta);
    const double raw = raw_inverse_at_exp(eta);
    const double tau = eta > 690 ? kInf : std::exp(eta);
    return std::max(1.0, std::min(tau, raw));
}

double MonotoneMap::log_value(double t) const {
    if (identity_floor_) {
        const double v = (*this)(t);
        return std::log(v);
    }
    const double q = inner_power_;
    if (const auto* p = std::get_if<PowerSpec>(&spec_))
        return std::log(p->c) + p->alpha * q * std::log(t);
    if (const auto* e = std::get_if<ExpPowerSpec>(&spec_)) {
        const double w = e->alpha * std::exp(e->beta * q * std::log(t));
        if (w > 36)
            return w + std::log1p((e->tau0 - 1.0) * std::exp(-w));
        return std::log(std::expm1(w) + e->tau0);
    }
    if (const auto* a = std::get_if<AffineSpec>(&spec_)) {
        if (a->a == 0)
            return std::log(a->b);
        const double lx = std::log(a->a) + q * std::log(t);
        if (lx > 690)
            return lx;
        return std::log(a->a * std::pow(t, q) + a->b);
    }
    const auto& s = std::get<PwlSpec>(spec_);
    const double v = raw_value(t);
    if (std::isinf(v) && !(std::pow(t, q) >= s.blowup)) {
        // linear extension overflowed; log of slope * t^q dominates
        return std::log(pwl_last_slope(s)) + q * std::log(t);
    }
    return std::log(v);
}

double MonotoneMap::log_value_at_exp(double u) const {
    if (identity_floor_) {
        MonotoneMap raw = *this;
        raw.identity_floor_ = false;
        // value = e^u below 1, max(raw, e^u) from 1 on
        return u < 0 ? u : std::max(raw.log_value_at_exp(u), u);
    }
    const double q = inner_power_;
    const double uq = u * q; // log of the family argument
    if (const auto* p = std::get_if<PowerSpec>(&spec_))
        return std::log(p->c) + p->alpha * uq;
    if (const auto* e = std::get_if<ExpPowerSpec>(&spec_)) {
        const double w = e->alpha * std::exp(e->beta * uq);
        if (w > 36)
            return w + std::log1p((e->tau0 - 1.0) * std::exp(-w));
        return std::log(std::expm1(w) + e->tau0);
    }
    if (const auto* a = std::get_if<AffineSpec>(&spec_)) {
        if (a->a == 0)
            return std::log(a->b);
        const double lx = std::log(a->a) + uq;
        if (lx > 690)
            return lx;
        return std::log(a->a * std::exp(uq) + a->b);
    }
    const auto& s = std::get<PwlSpec>(spec_);
    if (uq >= std::log(s.blowup))
        return kInf;
    if (uq > 690) {
        const double slope = pwl_last_slope(s);
        return slope > 0 ? std::log(slope) + uq : std::log(s.v.back());
    }
    return std::log(pwl_value(s, std::exp(uq)));
}

MonotoneMap MonotoneMap::power_compose(double p) const {
    if (!(p > 0) || !std::isfinite(p))
        throw std::invalid_argument("power_compose: need p > 0");
    if (identity_floor_)
        throw std::invalid_argument("power_compose: not supported after identity_floored()");
    MonotoneMap out = *this;
    out.inner_power_ *= p;
    return out;
}

MonotoneMap MonotoneMap::identity_floored() const {
    MonotoneMap out = *this;
    out.identity_floor_ = true;
    return out;
}

double MonotoneMap::tau0() const { return (*this)(0.0); }

double MonotoneMap::zero_plateau_end() const {
    if (identity_floor_)
        return 0.0;
    double u;
    if (std::get_if<PowerSpec>(&spec_)) {
        u = 0.0;
    } else if (const auto* e = std::get_if<ExpPowerSpec>(&spec_)) {
        u = 0.0;
        (void)e;
    } else if (const auto* a = std::get_if<AffineSpec>(&spec_)) {
        if (a->a == 0 && a->b == 0)
            return kInf;
        u = 0.0;
    } else {
        u = pwl_zero_plateau_end(std::get<PwlSpec>(spec_));
    }
    if (u == 0 || std::isinf(u))
        return u;
    return inner_power_ == 1 ? u : std::pow(u, 1.0 / inner_power_);
}

std::optional<double> MonotoneMap::blowup_point() const {
    const auto* s = std::get_if<PwlSpec>(&spec_);
    if (!s || !std::isfinite(s->blowup))
        return std::nullopt;
    double t = inner_power_ == 1 ? s->blowup : std::pow(s->blowup, 1.0 / inner_power_);
    if (identity_floor_)
        t = std::max(1.0, t);
    return t;
}

std::string MonotoneMap::describe() const {
    char buf[160];
    std::string base;
    if (const auto* p = std::get_if<PowerSpec>(&spec_)) {
        std::snprintf(buf, sizeof buf, "power(c=%g, alpha=%g)", p->c, p->alpha);
        base = buf;
    } else if (const auto* e = std::get_if<ExpPowerSpec>(&spec_)) {
        std::snprintf(buf, sizeof buf, "exp_power(alpha=%g, beta=%g, tau0=%g)", e->alpha, e->beta,
                      e->tau0);
        base = buf;
    } else if (const auto* a = std::get_if<AffineSpec>(&spec_)) {
        std::snprintf(buf, sizeof buf, "affine(a=%g, b=%g)", a->a, a->b);
        base = buf;
    } else {
        const auto& s = std::get<PwlSpec>(spec_);
        std::snprintf(buf, sizeof buf, "%s(%zu knots%s)", s.step ? "step" : "pwl", s.t.size(),
                      std::isfinite(s.blowup) ? ", blow-up" : "");
        base = buf;
    }
    if (inner_power_ != 1) {
        std::snprintf(buf, sizeof buf, " o t^%g", inner_power_);
        base += buf;
    }
    if (identity_floor_)
        base += " [identity-floored]";
    return base;
}

LogMap::LogMap(const MonotoneMap& phi, double p) : base_(phi.power_compose(p)) {}

LogMap log_transform(const MonotoneMap& phi, double p) { return LogMap(phi, p); }

ConvexityReport check_convex(const MonotoneMap& phi, std::span<const double> grid, double tol) {
    ConvexityReport rep;
    std::vector<double> g(grid.begin(), grid.end());
    std::sort(g.begin(), g.end());
    std::vector<double> vals(g.size());
    for (size_t i = 0; i < g.size(); ++i)
        vals[i] = phi(g[i]);

    for (size_t i = 0; i < g.size(); ++i) {
        for (size_t j = i + 1; j < g.size(); ++j) {
            const double rhs = 0.5 * (vals[i] + vals[j]);
            if (std::isinf(rhs))
                continue; // trivially satisfied on the extended reals
            const double mid = 0.5 * (g[i] + g[j]);
            const double gap = phi(mid) - rhs;
            if (gap > rep.worst_gap) {
                rep.worst_gap = gap;
                rep.worst_t1 = g[i];
                rep.worst_t2 = g[j];
            }
        }
    }
    rep.midpoint_ok = rep.worst_gap <= tol;

    // inclination [phi(t) - phi(0)]/t must be non-decreasing
    const double v0 = phi(0.0);
    double prev = -kInf, prev_t = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0))
            continue;
        const double val = vals[i];
        if (std::isinf(val))
            break; // ratio stays +inf afterwards
        const double incl = (val - v0) / g[i];
        const double drop = prev - incl;
        if (drop > rep.worst_inclination_drop) {
            rep.worst_inclination_drop = drop;
            rep.incl_t1 = prev_t;
            rep.incl_t2 = g[i];
        }
        prev = std::max(prev, incl);
        prev_t = g[i];
    }
    rep.inclination_ok = rep.worst_inclination_drop <= tol;
    return rep;
}

std::vector<double> default_convexity_grid(double lo, double hi, int count) {
    std::vector<double> g = log_grid(lo, hi, count);
    g.insert(g.begin(), 0.0);
    return g;
}

} // namespace qlab
