#include "qlab/extremal.hpp"

#include "qlab/modulus.hpp"
#include "qlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualTol = 1e-10; // relative residual of the functional equation

double psi(const MonotoneMap& phi, double t) { return t * phi(t); }

// Solve Psi(K) = (gamma/r)^2 on the bracket [phi^{-1}(gamma/r), gamma/r].
double solve_distortion(const MonotoneMap& phi, double gamma, double r, double* residual) {
    const double ratio = gamma / r;
    const double target = ratio * ratio;
    double lo = std::max(1.0, phi.inverse(ratio));
    double hi = std::max(lo, ratio);
    double flo = psi(phi, lo) - target;
    double fhi = psi(phi, hi) - target;
    if (flo > target * 1e-12 || fhi < -target * 1e-12)
        throw std::runtime_error("solve_profile: bracket failure, Psi is not usable for this phi");
    double best = hi, best_res = std::fabs(fhi) / target;
    if (std::fabs(flo) / target < best_res) {
        best = lo;
        best_res = std::fabs(flo) / target;
    }
    for (int it = 0; it < 400 && best_res > kResidualTol; ++it) {
        const double mid = lo > 0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (!(mid > lo) || !(mid < hi))
            break; // bracket exhausted at machine precision
        const double fm = psi(phi, mid) - target;
        const double res = std::fabs(fm) / target;
        if (res < best_res) {
            best = mid;
            best_res = res;
        }
        if (fm < 0)
            lo = mid;
        else
            hi = mid;
    }
    if (best_res > kResidualTol)
        throw std::runtime_error(
            "solve_profile: functional equation residual not met (does phi jump?)");
    if (residual)
        *residual = best_res;
    return best;
}

} // namespace

NormalizeResult normalize_phi(const MonotoneMap& phi) {
    NormalizeResult out;

    // linear growth witness phi(t) >= C t from T on, certified on a log grid
    if (std::isfinite(phi.value_at_inf())) {
        out.reason = "no linear growth witness: phi is bounded";
        return out;
    }
    const std::vector<double> grid = log_grid(1.0, 1e9, 220);
    std::vector<double> ratio(grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
        ratio[i] = phi(grid[i]) / grid[i];
    double best_c = 0, best_t = grid.front();
    double suffix_min = kInf;
    for (size_t i = grid.size(); i-- > 0;) {
        suffix_min = std::min(suffix_min, ratio[i]);
        if (suffix_min > best_c) {
            best_c = suffix_min;
            best_t = grid[i];
        }
    }
    // the ratio must not be decaying toward zero at the far end of the grid
    const double tail = ratio.back();
    const double earlier = phi(1e7) / 1e7;
    if (!(best_c > 1e-12) || tail < 0.8 * earlier) {
        out.reason = "no linear growth witness on the scan grid";
        return out;
    }
    out.witness = {best_c, best_t};

    ConditionReport conv = classify(phi, ConditionKind::l51());
    out.convergence = conv;
    if (conv.verdict == Verdict::Divergent) {
        out.reason = "the inverse integral diverges, so the boundary-extension criterion holds "
                     "and no counterexample exists";
        return out;
    }
    if (conv.verdict == Verdict::Inconclusive) {
        out.reason = "the inverse integral could not be classified";
        return out;
    }
    out.map = phi.identity_floored();
    return out;
}

double DistortionProfile::distortion_at(double r) const {
    if (!(r > 0) || !(r <= 1))
        throw std::invalid_argument("distortion_at: need r in (0, 1]");
    if (r == 1)
        return 1.0;
    return solve_distortion(phi, gamma, r, nullptr);
}

double DistortionProfile::inverse_distortion_at_log(double s) const {
    const double lg = std::log(gamma);
    if (lg + s < 350.0)
        return 1.0 / distortion_at(std::exp(-s));
    // the plain target (gamma/r)^2 leaves double range; bisect u = log K on
    // u + log phi(e^u) = 2(log gamma + s), bracketed by 1 <= K <= gamma/r
    const double target = 2.0 * (lg + s);
    double lo = 0.0, hi = lg + s;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid + phi.log_value_at_exp(mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * hi)
            break;
    }
    return std::exp(-0.5 * (lo + hi));
}

double DistortionProfile::integral_at(double t) const {
    if (!(t > 0) || !(t <= 1))
        throw std::invalid_argument("integral_at: need t in (0, 1]");
    if (t <= r_min) {
        // accumulate from scratch below the grid: I(t) = int_s^inf ds'/K(e^{-s'})
        auto h = [&](double s) { return inverse_distortion_at_log(s); };
        BlockSeries tail = integrate_dyadic_up(h, -std::log(t));
        return tail.total();
    }
    const double x = std::log(t);
    const auto it = std::upper_bound(radii.begin(), radii.end(), t);
    const size_t i1 = std::min(radii.size() - 1,
                               static_cast<size_t>(std::max<std::ptrdiff_t>(1, it - radii.begin())));
    const size_t i0 = i1 - 1;
    const double x0 = std::log(radii[i0]), x1 = std::log(radii[i1]);
    const double h = x1 - x0;
    const double u = std::clamp((x - x0) / h, 0.0, 1.0);
    // cubic Hermite with the exact slopes dI/d log r = 1/K
    const double y0 = accumulated[i0], y1 = accumulated[i1];
    const double m0 = slope[i0] * h, m1 = slope[i1] * h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * y1 +
           (u3 - u2) * m1;
}

double DistortionProfile::scale_at(double t) const { return std::exp(integral_at(t)); }

DistortionProfile solve_profile(const MonotoneMap& normalized_phi, int grid_size, double r_min) {
    if (!normalized_phi.is_identity_floored())
        throw std::invalid_argument("solve_profile: phi must come from normalize_phi");
    if (grid_size < 16)
        throw std::invalid_argument("solve_profile: need grid_size >= 16");
    if (!(r_min > 0) || !(r_min < 0.5))
        throw std::invalid_argument("solve_profile: need r_min in (0, 0.5)");

    DistortionProfile prof;
    prof.phi = normalized_phi;
    prof.gamma = std::sqrt(normalized_phi(1.0));
    prof.r_min = r_min;
    prof.radii = log_grid(r_min, 1.0, grid_size);

    prof.distortion.resize(prof.radii.size());
    prof.slope.resize(prof.radii.size());
    for (size_t i = 0; i < prof.radii.size(); ++i) {
        double res = 0;
        const double r = prof.radii[i];
        const double K = r == 1.0 ? 1.0 : solve_distortion(prof.phi, prof.gamma, r, &res);
        prof.max_residual = std::max(prof.max_residual, res);
        prof.distortion[i] = K;
        prof.slope[i] = 1.0 / K;
        if (i > 0 && !(prof.distortion[i] <= prof.distortion[i - 1] * (1 + 1e-12)))
            throw std::runtime_error("solve_profile: solved distortion failed to decrease");
    }

    // I(r_min): integrate 1/K below the grid in s = -log r
    auto h = [&](double s) { return prof.inverse_distortion_at_log(s); };
    BlockSeries below = integrate_dyadic_up(h, -std::log(r_min));
    if (below.verdict == Verdict::Divergent)
        throw std::runtime_error("solve_profile: accumulated integral diverges below the grid");
    prof.below_grid = below.total();
    prof.quad_error += below.error;

    // closed-form bound from K(r) >= phi^{-1}(gamma/r):
    // I(r_min) <= int_{gamma/r_min}^inf d tau/(tau phi^{-1}(tau))
    auto bound_f = [&](double eta) { return 1.0 / prof.phi.inverse_at_exp(eta); };
    BlockSeries bound = integrate_dyadic_up(bound_f, std::log(prof.gamma / r_min));
    prof.below_grid_bound = bound.total();

    // accumulate I along the grid, Kronrod panel per cell
    prof.accumulated.resize(prof.radii.size());
    prof.accumulated[0] = prof.below_grid;
    auto integrand = [&](double r) { return 1.0 / (r * prof.distortion_at(r)); };
    for (size_t i = 1; i < prof.radii.size(); ++i) {
        QuadResult cell = integrate(integrand, prof.radii[i - 1], prof.radii[i], 1e-12);
        prof.accumulated[i] = prof.accumulated[i - 1] + cell.value;
        prof.quad_error += cell.error;
    }
    return prof;
}

ExtremalMap::ExtremalMap(int n, DistortionProfile profile) : dim_(n), profile_(std::move(profile)) {
    if (n < 2)
        throw std::invalid_argument("ExtremalMap: need n >= 2");
}

ExtremalMap ExtremalMap::build(const MonotoneMap& phi, int n, int grid_size, double r_min) {
    NormalizeResult norm = normalize_phi(phi);
    if (!norm.accepted())
        throw std::invalid_argument("ExtremalMap: phi rejected: " + norm.reason);
    return ExtremalMap(n, solve_profile(*norm.map, grid_size, r_min));
}

double ExtremalMap::outer_radius() const { return std::exp(profile_.accumulated.back()); }

std::vector<double> ExtremalMap::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("ExtremalMap: point dimension mismatch");
    double norm2 = 0;
    for (double xi : x)
        norm2 += xi * xi;
    const double r = std::sqrt(norm2);
    if (!(r > 0) || !(r < 1))
        throw std::invalid_argument("ExtremalMap: the map acts on the punctured open unit ball");
    const double rho = profile_.scale_at(r);
    std::vector<double> y(x.begin(), x.end());
    for (double& yi : y)
        yi *= rho / r;
    return y;
}

Distortions ExtremalMap::distortions(double r) const {
    if (!(r > 0) || !(r < 1))
        throw std::invalid_argument("distortions: need r in (0, 1)");
    const double rho = profile_.scale_at(r);
    const double K = profile_.distortion_at(r);
    Distortions d{rho / r, rho / (r * K), K};
    return d;
}

ExtremalMap::Energy ExtremalMap::energy() const {
    // phi(K(r)) = Psi(K)/K = (gamma/r)^2 / K(r), so the radial energy
    // integrand is gamma^2 r^{n-3} / K(r).
    const double g2 = profile_.gamma * profile_.gamma;
    const int n = dim_;
    double total = 0;
    // gamma^2 r^{n-3}/K(r) dr becomes gamma^2 e^{-s(n-2)}/K(e^{-s}) ds
    auto in_s = [&](double s) {
        return g2 * std::exp(-s * (n - 2)) * profile_.inverse_distortion_at_log(s);
    };
    QuadResult head = integrate(in_s, 0.0, 1.0, 1e-10);
    BlockSeries tail = integrate_dyadic_up(in_s, 1.0);
    total = head.value + tail.total();

    const double omega = dimension_constants(n).sphere_area;
    Energy e;
    e.value = omega * total;
    e.bound = g2 * omega * profile_.accumulated.back();
    return e;
}

ExtremalMap::BoundaryReport ExtremalMap::boundary_report(std::span<const double> probes) const {
    BoundaryReport rep;
    rep.outer_radius = outer_radius();
    std::vector<double> sorted(probes.begin(), probes.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double prev_scale = kInf;
    for (double t : sorted) {
        BoundaryProbe pr;
        pr.t = t;
        pr.scale = profile_.scale_at(t);
        pr.oscillation = 2 * pr.scale;
        rep.scale_monotone = rep.scale_monotone && pr.scale <= prev_scale * (1 + 1e-12);
        rep.oscillation_above_2 = rep.oscillation_above_2 && pr.oscillation > 2.0;
        prev_scale = pr.scale;
        rep.probes.push_back(pr);
    }
    return rep;
}

} // namespace qlab
