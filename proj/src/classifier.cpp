#include "qlab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DyadicOptions dyadic_options(const ClassifyOptions& opt) {
    DyadicOptions d;
    d.k_max = opt.k_max;
    d.rel_tol = opt.rel_tol;
    return d;
}

// Central difference of H on a log grid with step ratio 1.01; one-sided at
// the edge of the zero plateau, 0 inside it (H = -inf there by convention).
double log_derivative(const MonotoneMap& phi_p, double t, double t0) {
    constexpr double kStep = 1.01;
    double lo = t / kStep, hi = t * kStep;
    if (lo <= t0)
        lo = t;
    const double hlo = phi_p.log_value(lo), hhi = phi_p.log_value(hi);
    if (std::isinf(hlo) && hlo < 0 && std::isinf(hhi) && hhi < 0)
        return 0.0;
    return (hhi - hlo) / (hi - lo);
}

// Lebesgue-Stieltjes int dH(t)/t over [a, b] by a fine log partition; jump
// contributions are picked up by the increments.
double stieltjes_block(const MonotoneMap& phi_p, double a, double b, int points = 512) {
    const std::vector<double> grid = log_grid(a, b, points);
    double sum = 0;
    double hprev = phi_p.log_value(grid.front());
    for (size_t j = 1; j < grid.size(); ++j) {
        const double h = phi_p.log_value(grid[j]);
        const double w = 1.0 / std::sqrt(grid[j - 1] * grid[j]);
        sum += (h - hprev) * w;
        hprev = h;
    }
    return sum;
}

ConditionReport make_report(const ConditionKind& kind, const BlockSeries& series, double lower,
                            std::string space) {
    ConditionReport rep;
    rep.kind = kind;
    rep.verdict = series.verdict;
    rep.block_sums = series.blocks;
    rep.tail_estimate = series.tail;
    rep.lower_used = lower;
    rep.space = std::move(space);
    rep.note = series.note;
    return rep;
}

// Shared engine for the value-space conditions: integrate
// w(eta) = 1 / [Phi_p^{-1}(e^eta)]^s from eta0 upward.
ConditionReport classify_inverse_integral(const ConditionKind& kind, const MonotoneMap& phi_p,
                                          double inv_exponent, double tau_lower,
                                          const ClassifyOptions& opt) {
    auto w = [&](double eta) {
        const double inv = phi_p.inverse_at_exp(eta);
        const double d = inv_exponent == 1 ? inv : std::pow(inv, inv_exponent);
        return 1.0 / d;
    };
    const double eta0 = std::log(tau_lower);
    double head = 0;
    const double anchor = std::max(eta0, 1.0);
    if (eta0 < 1.0) {
        QuadResult q = integrate(w, eta0, 1.0, opt.rel_tol);
        head = q.value;
    }
    BlockSeries series = integrate_dyadic_up(w, anchor, dyadic_options(opt));
    if (std::isinf(head)) {
        series.verdict = Verdict::Divergent;
        series.note = "infinite head piece";
    }
    ConditionReport rep = make_report(kind, series, eta0, "log tau");
    rep.head = head;
    return rep;
}

void require_positive_p(double p) {
    if (!(p > 0) || !std::isfinite(p))
        throw std::invalid_argument("condition: need p > 0");
}

} // namespace

double ConditionReport::total() const {
    if (verdict == Verdict::Divergent)
        return kInf;
    double sum = head + tail_estimate;
    for (double b : block_sums)
        sum += b;
    return sum;
}

const char* to_string(ConditionTag tag) {
    switch (tag) {
    case ConditionTag::C24: return "C24";
    case ConditionTag::C25: return "C25";
    case ConditionTag::C26: return "C26";
    case ConditionTag::C27: return "C27";
    case ConditionTag::C28: return "C28";
    case ConditionTag::C29: return "C29";
    case ConditionTag::T42: return "T42";
    default: return "L51";
    }
}

ConditionKind ConditionKind::c24(double p, std::optional<double> lower) {
    return {ConditionTag::C24, p, 2, lower};
}
ConditionKind ConditionKind::c25(double p, std::optional<double> lower) {
    return {ConditionTag::C25, p, 2, lower};
}
ConditionKind ConditionKind::c26(double p, std::optional<double> lower) {
    return {ConditionTag::C26, p, 2, lower};
}
ConditionKind ConditionKind::c27(double p, std::optional<double> lower) {
    return {ConditionTag::C27, p, 2, lower};
}
ConditionKind ConditionKind::c28(double p, std::optional<double> lower) {
    return {ConditionTag::C28, p, 2, lower};
}
ConditionKind ConditionKind::c29(double p, std::optional<double> lower) {
    return {ConditionTag::C29, p, 2, lower};
}
ConditionKind ConditionKind::t42(int n, std::optional<double> lower) {
    return {ConditionTag::T42, 1, n, lower};
}
ConditionKind ConditionKind::l51(std::optional<double> lower) {
    return {ConditionTag::L51, 1, 2, lower};
}

ConditionReport classify(const MonotoneMap& phi, const ConditionKind& kind,
                         const ClassifyOptions& opt) {
    const ConditionTag tag = kind.tag;

    if (tag == ConditionTag::T42) {
        if (kind.n < 2)
            throw std::invalid_argument("T42: need n >= 2");
        const double tau0 = phi.tau0();
        double lower = kind.lower.value_or(std::max(1.0, 2 * tau0));
        if (!(lower > tau0))
            throw std::invalid_argument("T42: lower limit must exceed Phi(0)");
        const MonotoneMap phi_p = kind.n == 2 ? phi : phi.power_compose(kind.n - 1);
        ConditionReport rep = classify_inverse_integral(kind, phi_p, 1.0, lower, opt);
        return rep;
    }
    if (tag == ConditionTag::L51) {
        const double tau0 = phi.tau0();
        double lower = kind.lower.value_or(std::max(1.0, 2 * tau0));
        if (!(lower > tau0))
            throw std::invalid_argument("L51: lower limit must exceed phi(0)");
        return classify_inverse_integral(kind, phi, 1.0, lower, opt);
    }

    require_positive_p(kind.p);
    const MonotoneMap phi_p = phi.power_compose(kind.p);
    const double t0 = phi_p.zero_plateau_end();
    if (std::isinf(t0))
        throw std::invalid_argument("condition: the zero map has no meaningful log transform");

    if (tag == ConditionTag::C28 || tag == ConditionTag::C29) {
        const double tau0 = phi_p.tau0();
        if (tag == ConditionTag::C29) {
            const double lower = kind.lower.value_or(std::max(1.0, 2 * tau0));
            if (!(lower > tau0))
                throw std::invalid_argument("C29: lower limit must exceed Phi_p(+0)");
            return classify_inverse_integral(kind, phi_p, 1.0, lower, opt);
        }
        // C28 lower limit lives in eta space; delta_* > H_p(+0) = log tau0.
        const double h0 = std::log(tau0); // -inf when tau0 = 0
        const double eta_lower = kind.lower.value_or(std::max(1.0, 2 * std::max(0.0, h0)));
        if (!(eta_lower > h0))
            throw std::invalid_argument("C28: lower limit must exceed H_p(+0)");
        return classify_inverse_integral(kind, phi_p, 1.0, std::exp(eta_lower), opt);
    }

    // t-space conditions C24..C27. A finite blow-up point makes all of them
    // +infinity (the integrals are completed by infinity there).
    if (auto T = phi_p.blowup_point()) {
        ConditionKind k = kind;
        ConditionReport rep;
        rep.kind = k;
        rep.verdict = Verdict::Divergent;
        rep.space = tag == ConditionTag::C27 ? "t toward 0" : "t";
        rep.lower_used = kind.lower.value_or(0);
        rep.note = "value infinite beyond t = " + std::to_string(*T);
        return rep;
    }

    if (tag == ConditionTag::C27) {
        double delta = kind.lower.value_or(t0 > 0 ? std::min(1.0, 1.0 / (2 * t0)) : 1.0);
        if (t0 > 0 && !(delta < 1.0 / t0))
            throw std::invalid_argument("C27: lower limit must stay below 1/t0");
        if (!(delta > 0))
            throw std::invalid_argument("C27: need a positive upper limit");
        auto f = [&](double t) { return phi_p.log_value(1.0 / t); };
        BlockSeries series = integrate_dyadic_down(f, delta, dyadic_options(opt));
        return make_report(kind, series, delta, "t toward 0");
    }

    double delta = kind.lower.value_or(std::max(1.0, 2 * t0));
    if (!(delta > t0))
        throw std::invalid_argument("condition: lower limit must exceed t0 = sup{Phi_p = 0}");

    switch (tag) {
    case ConditionTag::C24: {
        auto f = [&](double t) { return log_derivative(phi_p, t, t0) / t; };
        BlockSeries series = integrate_dyadic_up(f, delta, dyadic_options(opt));
        return make_report(kind, series, delta, "t");
    }
    case ConditionTag::C25: {
        auto block = [&](double lo, double hi) { return stieltjes_block(phi_p, lo, hi); };
        BlockSeries series = classify_blocks(block, delta, true, dyadic_options(opt));
        return make_report(kind, series, delta, "t");
    }
    case ConditionTag::C26: {
        auto f = [&](double t) { return phi_p.log_value(t) / (t * t); };
        BlockSeries series = integrate_dyadic_up(f, delta, dyadic_options(opt));
        return make_report(kind, series, delta, "t");
    }
    default:
        throw std::logic_error("classify: unhandled condition tag");
    }
}

EquivalenceReport classify_all_equivalent(const MonotoneMap& phi, double p,
                                          const ClassifyOptions& opt) {
    require_positive_p(p);
    EquivalenceReport rep;
    const std::vector<double> grid = default_convexity_grid();
    rep.convexity = check_convex(phi, grid);
    rep.convexity_warning = !rep.convexity.ok();

    const ConditionKind kinds[] = {ConditionKind::c24(p), ConditionKind::c25(p),
                                   ConditionKind::c26(p), ConditionKind::c27(p),
                                   ConditionKind::c28(p), ConditionKind::c29(p)};
    std::optional<Verdict> agreed;
    for (const auto& kind : kinds) {
        rep.reports.push_back(classify(phi, kind, opt));
        const Verdict v = rep.reports.back().verdict;
        if (v == Verdict::Inconclusive)
            continue;
        if (!agreed)
            agreed = v;
        else if (*agreed != v)
            rep.consistent = false;
    }
    return rep;
}

Verdict analytic_oracle(const MonotoneMap& phi, const ConditionKind& kind) {
    if (phi.is_identity_floored())
        throw std::invalid_argument("analytic_oracle: normalized maps are not supported");
    double p_eff;
    switch (kind.tag) {
    case ConditionTag::T42:
        if (kind.n < 2)
            throw std::invalid_argument("analytic_oracle: need n >= 2");
        p_eff = kind.n - 1;
        break;
    case ConditionTag::L51:
        p_eff = 1;
        break;
    default:
        require_positive_p(kind.p);
        p_eff = kind.p;
        break;
    }
    switch (phi.family()) {
    case MapFamily::Power:
        return Verdict::Convergent;
    case MapFamily::Affine: {
        const AffineSpec& a = *phi.as_affine();
        if (a.a == 0 && a.b == 0)
            throw std::invalid_argument("analytic_oracle: the zero map is out of scope");
        return Verdict::Convergent;
    }
    case MapFamily::ExpPower: {
        const ExpPowerSpec& e = *phi.as_exp_power();
        const double growth = e.beta * phi.inner_power() * p_eff;
        return growth >= 1.0 ? Verdict::Divergent : Verdict::Convergent;
    }
    default:
        throw std::invalid_argument("analytic_oracle: unsupported family");
    }
}

} // namespace qlab
