#pragma once

#include "qlab/classifier.hpp"
#include "qlab/monotone.hpp"

#include <span>
#include <string>
#include <vector>

namespace qlab {

struct GrowthWitness {
    double C = 0; ///< phi(t) >= C t certified from T on
    double T = 0;
};

/// Outcome of preparing phi for the radial counterexample construction.
struct NormalizeResult {
    std::optional<MonotoneMap> map; ///< identity-floored phi when accepted
    GrowthWitness witness;
    std::optional<ConditionReport> convergence; ///< the inverse-integral condition
    std::string reason;                         ///< empty when accepted
    bool accepted() const { return map.has_value(); }
};

/// Accepts non-decreasing phi with a linear growth witness and a convergent
/// inverse integral; returns phi adjusted to the identity below 1 and
/// max(phi(t), t) from 1 on. A divergent inverse integral means the
/// boundary-extension criterion holds and no counterexample exists.
NormalizeResult normalize_phi(const MonotoneMap& phi);

/// Solved radial distortion profile: K(r) with Psi(K(r)) = (gamma/r)^2 for
/// Psi(t) = t phi(t), and the accumulated integral I(t) = int_0^t dr/(r K(r)).
struct DistortionProfile {
    MonotoneMap phi;    ///< normalized map
    double gamma = 1;   ///< sqrt(phi(1))
    double r_min = 0;   ///< first grid radius
    std::vector<double> radii;       ///< log-spaced, last element 1
    std::vector<double> distortion;  ///< K at the grid radii, strictly decreasing
    std::vector<double> accumulated; ///< I at the grid radii
    std::vector<double> slope;       ///< dI/d(log r) = 1/K at the grid radii
    double below_grid = 0;           ///< I(r_min)
    double below_grid_bound = 0;     ///< closed-form tail bound for I(r_min)
    double max_residual = 0;         ///< worst relative residual of the solve
    double quad_error = 0;

    double distortion_at(double r) const; ///< fresh solve, any r in (0, 1]
    double integral_at(double t) const;   ///< I(t), t in (0, 1]
    double scale_at(double t) const;      ///< rho(t) = exp(I(t))

    /// 1/K(e^{-s}); falls back to the sandwich bound K >= phi^{-1}(gamma/r)
    /// once the functional-equation target leaves double range.
    double inverse_distortion_at_log(double s) const;
};

DistortionProfile solve_profile(const MonotoneMap& normalized_phi, int grid_size = 4096,
                                double r_min = 1e-6);

struct Distortions {
    double tangential = 0; ///< rho(r)/r
    double radial = 0;     ///< rho(r)/(r K(r))
    double outer = 0;      ///< K(r), the outer dilatation
};

/// The radial map f(x) = x/|x| * rho(|x|) of the counterexample, mapping the
/// punctured unit ball onto the ring 1 < |y| < R.
class ExtremalMap {
public:
    ExtremalMap(int n, DistortionProfile profile);

    /// normalize_phi + solve_profile; throws std::invalid_argument when phi
    /// is rejected.
    static ExtremalMap build(const MonotoneMap& phi, int n, int grid_size = 4096,
                             double r_min = 1e-6);

    int dim() const { return dim_; }
    const DistortionProfile& profile() const { return profile_; }
    double gamma() const { return profile_.gamma; }
    double outer_radius() const; ///< R = e^{I(1)}

    std::vector<double> operator()(std::span<const double> x) const;

    Distortions distortions(double r) const;

    struct Energy {
        double value = 0; ///< integral of phi(K_O) over the ball
        double bound = 0; ///< gamma^2 omega_{n-1} I(1)
    };
    Energy energy() const;

    struct BoundaryProbe {
        double t = 0;
        double scale = 0;       ///< rho(t) = |f| on the sphere of radius t
        double oscillation = 0; ///< diam f(S(0,t)) = 2 rho(t)
    };
    struct BoundaryReport {
        std::vector<BoundaryProbe> probes;
        double outer_radius = 0;
        bool scale_monotone = true;      ///< rho decreasing with t
        bool oscillation_above_2 = true; ///< images never shrink below diameter 2
    };
    BoundaryReport boundary_report(std::span<const double> probes) const;

private:
    int dim_;
    DistortionProfile profile_;
};

} // namespace qlab
