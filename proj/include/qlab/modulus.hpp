#pragma once

#include "qlab/fields.hpp"
#include "qlab/quadrature.hpp"

#include <string>
#include <vector>

namespace qlab {

/// Area of the unit sphere and volume of the unit ball in R^n.
struct DimensionConstants {
    int n = 2;
    double sphere_area = 0; ///< omega_{n-1} = n Omega_n
    double ball_volume = 0; ///< Omega_n = pi^{n/2} / Gamma(n/2 + 1)
};

DimensionConstants dimension_constants(int n);

/// Modulus of the path family joining the boundary spheres of the ring
/// r < |x| < R: omega_{n-1} (log(R/r))^{1-n}.
double ring_modulus(double r, double R, int n);

/// Where the spheres around the reference point are taken.
enum class NormCenter {
    Origin,    ///< x0 = 0, full spheres inside the ball
    Boundary2, ///< x0 on the unit circle, n = 2 cap only
};

/// L^{n-1} norm of Q over the sphere slice of radius r:
/// (integral of Q^{n-1} over the slice)^{1/(n-1)}.
double spherical_norm(const RadialField& Q, double r, NormCenter center = NormCenter::Origin);

struct NormDivergenceReport {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<double> block_sums;
    double tail_estimate = 0;
    double delta = 0;
    std::string note;
};

/// Classify int_0^delta dr / ||Q||_{n-1}(r) with mirrored dyadic blocks.
NormDivergenceReport norm_divergence(const RadialField& Q, double delta,
                                     NormCenter center = NormCenter::Origin,
                                     const DyadicOptions& opt = {});

struct NormProfile {
    std::vector<double> radii;
    std::vector<double> norms;
    NormDivergenceReport divergence;
};

/// Tabulate ||Q||_{n-1}(r) on count log-spaced radii in (0, delta] and attach
/// the divergence verdict.
NormProfile norm_profile(const RadialField& Q, double delta, int count = 64,
                         NormCenter center = NormCenter::Origin);

} // namespace qlab
