#include "qlab/modulus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qlab {

DimensionConstants dimension_constants(int n) {
    if (n < 2)
        throw std::invalid_argument("dimension_constants: need n >= 2");
    DimensionConstants c;
    c.n = n;
    c.ball_volume = std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    c.sphere_area = n * c.ball_volume;
    return c;
}

double ring_modulus(double r, double R, int n) {
    if (!(r > 0) || !(R > r))
        throw std::invalid_argument("ring_modulus: need 0 < r < R");
    const DimensionConstants c = dimension_constants(n);
    return c.sphere_area * std::pow(std::log(R / r), 1 - n);
}

double spherical_norm(const RadialField& Q, double r, NormCenter center) {
    const int n = Q.dim();
    if (center == NormCenter::Boundary2) {
        if (n != 2)
            throw std::invalid_argument("spherical_norm: boundary caps are computed for n = 2 only");
        if (!Q.is_radial())
            throw std::invalid_argument("spherical_norm: boundary caps need a radial Q");
        if (!(r > 0) || !(r < 2))
            throw std::invalid_argument("spherical_norm: boundary cap radius must lie in (0, 2)");
        // arc of the circle |x - x0| = r inside the unit disc, x0 on the circle
        const double arc = 2.0 * r * std::acos(r / 2.0);
        return Q.radial_value(r) * arc;
    }
    if (!(r > 0) || !(r < 1))
        throw std::invalid_argument("spherical_norm: radius must lie in (0, 1)");
    const DimensionConstants c = dimension_constants(n);
    const double mean =
        Q.sphere_mean(r, [&](double q) { return std::pow(q, static_cast<double>(n - 1)); });
    const double integral = mean * c.sphere_area * std::pow(r, n - 1);
    return std::pow(integral, 1.0 / (n - 1));
}

NormDivergenceReport norm_divergence(const RadialField& Q, double delta, NormCenter center,
                                     const DyadicOptions& opt) {
    const double limit = center == NormCenter::Boundary2 ? 2.0 : 1.0;
    if (!(delta > 0) || !(delta < limit))
        throw std::invalid_argument("norm_divergence: delta out of range");
    auto f = [&](double r) { return 1.0 / spherical_norm(Q, r, center); };
    BlockSeries series = integrate_dyadic_down(f, delta, opt);
    NormDivergenceReport rep;
    rep.verdict = series.verdict;
    rep.block_sums = series.blocks;
    rep.tail_estimate = series.tail;
    rep.delta = delta;
    rep.note = series.note;
    return rep;
}

NormProfile norm_profile(const RadialField& Q, double delta, int count, NormCenter center) {
    NormProfile prof;
    prof.radii = log_grid(delta * 1e-6, delta, count);
    prof.norms.reserve(prof.radii.size());
    for (double r : prof.radii)
        prof.norms.push_back(spherical_norm(Q, r, center));
    prof.divergence = norm_divergence(Q, delta, center);
    return prof;
}

} // namespace qlab
