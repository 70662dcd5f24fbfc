#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qlab {

/// c * t^alpha
struct PowerSpec {
    double c = 1;
    double alpha = 1;
};

/// exp(alpha * t^beta) - 1 + tau0
struct ExpPowerSpec {
    double alpha = 1;
    double beta = 1;
    double tau0 = 0;
};

/// a * t + b
struct AffineSpec {
    double a = 1;
    double b = 0;
};

/// Piecewise-linear or step table on strictly increasing knots with
/// non-decreasing values; constant left of the first knot; beyond the last
/// knot the table continues with the last slope (linear mode) or stays
/// constant (step mode); values are +infinity from the blow-up knot on.
struct PwlSpec {
    std::vector<double> t;
    std::vector<double> v;
    bool step = false;
    double blowup = std::numeric_limits<double>::infinity();
};

enum class MapFamily { Power, ExpPower, Affine, Pwl };

/// Non-decreasing map [0,inf] -> [0,inf].
///
/// Values are plain doubles under extended-real conventions (IEEE
/// infinities; 1/inf = 0, log 0 = -inf). A map is one of four closed-form
/// families, optionally composed with t -> t^q on the inside
/// (power_compose) and optionally put through the identity floor used by
/// the extremal construction (t below 1, max(value, t) from 1 on).
class MonotoneMap {
public:
    MonotoneMap(); ///< the identity map

    static MonotoneMap power(double c, double alpha);
    static MonotoneMap exp_power(double alpha, double beta, double tau0 = 0);
    static MonotoneMap affine(double a, double b);
    static MonotoneMap pwl(PwlSpec spec);
    static MonotoneMap identity() { return power(1, 1); }

    /// Evaluate at t in [0, inf].
    double operator()(double t) const;

    /// Value at +infinity (the supremum).
    double value_at_inf() const;

    /// Generalized inverse: inf{ t : value(t) >= tau }; +inf when the
    /// super-level set is empty.
    double inverse(double tau) const;

    /// inverse(exp(eta)), stable for eta far beyond log(DBL_MAX).
    double inverse_at_exp(double eta) const;

    /// log(value(t)), stable where the value itself overflows; -inf where
    /// the value is 0.
    double log_value(double t) const;

    /// log(value(e^u)), stable for arguments far beyond double range.
    double log_value_at_exp(double u) const;

    /// The map t -> value(t^p), p > 0. Not available after identity_floored().
    MonotoneMap power_compose(double p) const;

    /// Identity on [0,1), max(value, t) from 1 on.
    MonotoneMap identity_floored() const;

    /// value(0). With the conventions here this also equals the right limit
    /// at 0 (tables are extended by a constant left of the first knot).
    double tau0() const;

    /// sup{ t : value(t) = 0 }; 0 when value(0) > 0, +inf for the zero map.
    double zero_plateau_end() const;

    /// Finite abscissa from which the value is +infinity, if any.
    std::optional<double> blowup_point() const;

    MapFamily family() const;
    double inner_power() const { return inner_power_; }
    bool is_identity_floored() const { return identity_floor_; }
    const PowerSpec* as_power() const { return std::get_if<PowerSpec>(&spec_); }
    const ExpPowerSpec* as_exp_power() const { return std::get_if<ExpPowerSpec>(&spec_); }
    const AffineSpec* as_affine() const { return std::get_if<AffineSpec>(&spec_); }
    const PwlSpec* as_pwl() const { return std::get_if<PwlSpec>(&spec_); }

    std::string describe() const;

private:
    explicit MonotoneMap(std::variant<PowerSpec, ExpPowerSpec, AffineSpec, PwlSpec> spec);

    double raw_value(double t) const;
    double raw_inverse(double tau) const;
    double raw_inverse_at_exp(double eta) const;

    std::variant<PowerSpec, ExpPowerSpec, AffineSpec, PwlSpec> spec_;
    double inner_power_ = 1;
    bool identity_floor_ = false;
};

/// H(t) = log Phi_p(t) with Phi_p(t) = Phi(t^p), together with its inverse
/// H^{-1}(eta) = Phi_p^{-1}(e^eta).
class LogMap {
public:
    LogMap(const MonotoneMap& phi, double p);
    double operator()(double t) const { return base_.log_value(t); }
    double inverse(double eta) const { return base_.inverse_at_exp(eta); }
    const MonotoneMap& composed_map() const { return base_; }

private:
    MonotoneMap base_;
};

LogMap log_transform(const MonotoneMap& phi, double p);

struct ConvexityReport {
    bool midpoint_ok = true;
    double worst_gap = 0; ///< max value(mid) - (value(t1)+value(t2))/2
    double worst_t1 = 0, worst_t2 = 0;
    bool inclination_ok = true;
    double worst_inclination_drop = 0; ///< max drop of [value(t)-value(0)]/t
    double incl_t1 = 0, incl_t2 = 0;
    bool ok() const { return midpoint_ok && inclination_ok; }
};

/// Midpoint-convexity over all grid pairs plus the inclination criterion
/// ([value(t)-value(0)]/t non-decreasing), with absolute slack tol.
ConvexityReport check_convex(const MonotoneMap& phi, std::span<const double> grid,
                             double tol = 1e-9);

/// Convenience grid for convexity checks: 0 plus log-spaced points.
std::vector<double> default_convexity_grid(double lo = 1e-4, double hi = 1e3, int count = 120);

} // namespace qlab
