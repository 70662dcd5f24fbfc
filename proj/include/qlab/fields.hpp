#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qlab {

/// Scalar field on the unit ball with values in [0, inf], given either as a
/// radial closed form or as samples on a radius x angle product grid
/// (dimensions 2 and 3 only for sampled data).
class RadialField {
public:
    /// K = c
    static RadialField constant(double c, int dim);
    /// K = c r^{-a}
    static RadialField radial_power(double c, double a, int dim);
    /// K = c max(1, log(1/r))^b
    static RadialField radial_log_power(double c, double b, int dim);
    /// n = 2 samples: values[i][j] at radius radii[i], angle 2 pi j / m.
    static RadialField sampled2(std::vector<double> radii,
                                std::vector<std::vector<double>> values);
    /// n = 3 samples: values[i][l * n_lon + j] at radius radii[i],
    /// Gauss-Legendre colatitude node l (in cos), longitude 2 pi j / n_lon.
    static RadialField sampled3(std::vector<double> radii,
                                std::vector<std::vector<double>> values, int n_lat, int n_lon);
    /// Sample a closed form f(x) on a default log-spaced grid.
    static RadialField sample(int dim, const std::function<double(const std::vector<double>&)>& f,
                              int n_radii = 160, int n_ang = 0);

    enum class Kind { Constant, Power, LogPower, Sampled };

    int dim() const { return dim_; }
    Kind kind() const { return kind_; }
    bool is_radial() const { return kind_ != Kind::Sampled; }
    double param_c() const { return c_; }
    double param_a() const { return a_; }

    /// Value K(r) for radial specs.
    double radial_value(double r) const;

    /// Area-measure mean of g(K(x)) over the sphere |x| = r.
    double sphere_mean(double r, const std::function<double(double)>& g) const;
    /// Mean of K itself over the sphere |x| = r.
    double sphere_mean(double r) const;
    /// Mean over the sphere r = e^{-s}; stable for s far beyond -log(DBL_MIN).
    double sphere_mean_at_log(double s, const std::function<double(double)>& g) const;
    double sphere_mean_at_log(double s) const;
    /// log K(e^{-s}) for radial specs, stable for any s > 0.
    double log_radial_value_at_log(double s) const;

    const std::vector<double>& radii() const { return radii_; }
    const std::vector<std::vector<double>>& values() const { return values_; }
    int n_lat() const { return n_lat_; }
    int n_lon() const { return n_lon_; }

    std::string describe() const;

private:
    RadialField() = default;

    Kind kind_ = Kind::Constant;
    int dim_ = 2;
    double c_ = 1, a_ = 0;
    // sampled data
    std::vector<double> radii_;
    std::vector<std::vector<double>> values_;
    int n_lat_ = 0, n_lon_ = 0; // dim 3 layout
    // Gauss-Legendre nodes/weights for dim 3 sampled means
    std::vector<double> gl_w_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace qlab
