#include "qlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 15-point Kronrod nodes with the embedded 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
    double value;
    double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fmid = f(mid);
    double k15 = kWgk[7] * fmid;
    double g7 = kWg[3] * fmid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        k15 += kWgk[i] * fsum;
        if (i % 2 == 1)
            g7 += kWg[i / 2] * fsum;
    }
    k15 *= half;
    g7 *= half;
    double err = std::fabs(k15 - g7);
    // QUADPACK-style sharpening of the raw difference.
    if (err > 0)
        err = err * std::min(1.0, std::pow(200.0 * err / std::max(std::fabs(k15), 1e-300), 1.5));
    return {k15, err};
}

} // namespace

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Divergent: return "Divergent";
    case Verdict::Convergent: return "Convergent";
    default: return "Inconclusive";
    }
}

double BlockSeries::total() const {
    if (verdict == Verdict::Divergent)
        return kInf;
    return sum + tail;
}

std::vector<double> log_grid(double a, double b, int count) {
    if (!(a > 0) || !(b > a) || count < 2)
        throw std::invalid_argument("log_grid: need 0 < a < b and count >= 2");
    std::vector<double> g(static_cast<size_t>(count));
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < count; ++i)
        g[static_cast<size_t>(i)] = std::exp(la + (lb - la) * i / (count - 1));
    g.front() = a;
    g.back() = b;
    return g;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol) {
    QuadResult res;
    if (!(b > a))
        return res;

    // Initial panels: log-spaced when the interval spans several octaves.
    std::vector<std::pair<double, double>> stack;
    if (a > 0 && b / a >= 4.0) {
        const int panels = std::min(48, static_cast<int>(std::ceil(std::log2(b / a))));
        std::vector<double> cuts = log_grid(a, b, panels + 1);
        for (size_t i = 0; i + 1 < cuts.size(); ++i)
            stack.emplace_back(cuts[i], cuts[i + 1]);
    } else {
        stack.emplace_back(a, b);
    }

    int budget = 20000;
    const double eps = std::numeric_limits<double>::epsilon();
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        PanelEstimate est = gk15(f, lo, hi);
        if (std::isinf(est.value)) {
            res.value = est.value;
            res.converged = false;
            return res;
        }
        if (std::isnan(est.value)) {
            res.value = est.value;
            res.converged = false;
            return res;
        }
        const double width = hi - lo;
        const bool small = width <= eps * (std::fabs(lo) + std::fabs(hi));
        if (est.error <= rel_tol * std::fabs(est.value) + abs_tol || small || budget <= 0) {
            res.value += est.value;
            res.error += est.error;
            if (budget <= 0)
                res.converged = false;
            continue;
        }
        --budget;
        const double mid = 0.5 * (lo + hi);
        stack.emplace_back(lo, mid);
        stack.emplace_back(mid, hi);
    }
    return res;
}

BlockSeries classify_blocks(const std::function<double(double, double)>& block_integral,
                            double a, bool upward, const DyadicOptions& opt) {
    if (!(a > 0) || !std::isfinite(a))
        throw std::invalid_argument("classify_blocks: anchor must be positive and finite");
    BlockSeries out;
    double max_abs = 0;
    for (int k = 0; k <= opt.k_max; ++k) {
        double lo, hi;
        if (upward) {
            lo = a * std::ldexp(1.0, k);
            hi = a * std::ldexp(1.0, k + 1);
        } else {
            lo = a * std::ldexp(1.0, -(k + 1));
            hi = a * std::ldexp(1.0, -k);
        }
        if (!(hi > lo) || !std::isfinite(hi)) {
            out.note = "block range exhausted floating point";
            break;
        }
        const double bk = block_integral(lo, hi);
        if (std::isnan(bk)) {
            out.verdict = Verdict::Inconclusive;
            out.note = "NaN block";
            return out;
        }
        if (std::isinf(bk)) {
            out.blocks.push_back(bk);
            out.verdict = Verdict::Divergent;
            out.sum = kInf;
            out.note = "infinite block";
            return out;
        }
        out.blocks.push_back(bk);
        out.sum += bk;
        max_abs = std::max(max_abs, std::fabs(bk));

        // Early exit once the trailing window has vanished relative to the mass seen.
        if (static_cast<int>(out.blocks.size()) >= opt.window) {
            const double vanish = opt.vanish_floor * std::max(1.0, std::fabs(out.sum));
            bool gone = true;
            for (int j = 0; j < opt.window; ++j)
                gone = gone && std::fabs(out.blocks[out.blocks.size() - 1 - j]) <= vanish;
            if (gone) {
                out.verdict = Verdict::Convergent;
                out.note = "trailing blocks exhausted";
                return out;
            }
        }
    }

    const int m = static_cast<int>(out.blocks.size());
    if (m < 2) {
        out.verdict = Verdict::Inconclusive;
        out.note = "too few blocks";
        return out;
    }
    const int win = std::min(opt.window, m - 1);
    // Ratios between the last win+1 blocks.
    bool all_decay = true, all_sustain = true, floor_ok = true;
    double rmax = 0;
    for (int j = 0; j < win; ++j) {
        const double prev = std::fabs(out.blocks[static_cast<size_t>(m - 2 - j)]);
        const double next = std::fabs(out.blocks[static_cast<size_t>(m - 1 - j)]);
        const double ratio = prev > 0 ? next / prev : (next > 0 ? kInf : 0.0);
        rmax = std::max(rmax, ratio);
        all_decay = all_decay && ratio <= opt.decay_ratio;
        all_sustain = all_sustain && ratio >= opt.decay_ratio;
    }
    for (int j = 0; j < std::min(opt.window, m); ++j)
        floor_ok = floor_ok && std::fabs(out.blocks[static_cast<size_t>(m - 1 - j)]) > opt.divergence_floor;

    if (all_decay) {
        out.verdict = Verdict::Convergent;
        const double r = std::min(rmax, opt.decay_ratio);
        const double last = out.blocks.back();
        out.tail = last * r / (1.0 - r);
        out.note = "geometric decay";
    } else if (floor_ok && all_sustain) {
        out.verdict = Verdict::Divergent;
        out.note = "sustained blocks above divergence floor";
    } else {
        out.verdict = Verdict::Inconclusive;
        out.note = "non-monotone block behaviour";
    }
    return out;
}

BlockSeries integrate_dyadic_up(const std::function<double(double)>& f, double a,
                                const DyadicOptions& opt) {
    double err = 0;
    auto block = [&](double lo, double hi) {
        QuadResult q = integrate(f, lo, hi, opt.rel_tol);
        err += q.error;
        return q.value;
    };
    BlockSeries s = classify_blocks(block, a, true, opt);
    s.error = err;
    return s;
}

BlockSeries integrate_dyadic_down(const std::function<double(double)>& f, double b,
                                  const DyadicOptions& opt) {
    double err = 0;
    auto block = [&](double lo, double hi) {
        QuadResult q = integrate(f, lo, hi, opt.rel_tol);
        err += q.error;
        return q.value;
    };
    BlockSeries s = classify_blocks(block, b, false, opt);
    s.error = err;
    return s;
}

double monotone_superlevel_inf(const std::function<double(double)>& f, double tau,
                               double rel_tol) {
    auto hit = [&](double t) { return f(t) >= tau; };
    if (hit(0.0))
        return 0.0;
    double lo = 0.0, hi = 1.0;
    while (!hit(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300)
            return kInf;
    }
    for (int it = 0; it < 4000; ++it) {
        const double mid = lo > 0 ? std::sqrt(lo * hi) : hi / 2.0;
        if (!(mid > lo) || !(mid < hi))
            break;
        if (hit(mid))
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= rel_tol * hi || hi <= 1e-300)
            break;
    }
    return hi;
}

} // namespace qlab
