#include "qlab/fields.hpp"

#include "qlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace qlab {

namespace {

void check_dim(int dim) {
    if (dim < 2)
        throw std::invalid_argument("RadialField: need dimension >= 2");
}

void check_samples(const std::vector<double>& radii, const std::vector<std::vector<double>>& v,
                   size_t row) {
    if (radii.size() < 2 || radii.size() != v.size())
        throw std::invalid_argument("RadialField: need >= 2 radius rows matching the value rows");
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0) || radii[i] >= 1)
            throw std::invalid_argument("RadialField: sample radii must lie in (0, 1)");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw std::invalid_argument("RadialField: sample radii must be strictly increasing");
        if (v[i].size() != row)
            throw std::invalid_argument("RadialField: ragged value rows");
        for (double x : v[i])
            if (std::isnan(x) || x < 0)
                throw std::invalid_argument("RadialField: values must be in [0, inf]");
    }
}

} // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    // Newton iteration on Legendre polynomials; standard and plenty accurate
    // for the modest orders used here.
    nodes.assign(static_cast<size_t>(n), 0.0);
    weights.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15)
                break;
        }
        nodes[static_cast<size_t>(i)] = -x;
        nodes[static_cast<size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1 - x * x) * pp * pp);
        weights[static_cast<size_t>(i)] = w;
        weights[static_cast<size_t>(n - 1 - i)] = w;
    }
}

RadialField RadialField::constant(double c, int dim) {
    check_dim(dim);
    if (std::isnan(c) || c < 0)
        throw std::invalid_argument("RadialField: constant must be in [0, inf]");
    RadialField f;
    f.kind_ = Kind::Constant;
    f.dim_ = dim;
    f.c_ = c;
    return f;
}

RadialField RadialField::radial_power(double c, double a, int dim) {
    check_dim(dim);
    if (!(c >= 0) || !std::isfinite(a))
        throw std::invalid_argument("RadialField: radial power needs c >= 0 and finite a");
    RadialField f;
    f.kind_ = Kind::Power;
    f.dim_ = dim;
    f.c_ = c;
    f.a_ = a;
    return f;
}

RadialField RadialField::radial_log_power(double c, double b, int dim) {
    check_dim(dim);
    if (!(c >= 0) || !std::isfinite(b))
        throw std::invalid_argument("RadialField: radial log power needs c >= 0 and finite b");
    RadialField f;
    f.kind_ = Kind::LogPower;
    f.dim_ = dim;
    f.c_ = c;
    f.a_ = b;
    return f;
}

RadialField RadialField::sampled2(std::vector<double> radii,
                                  std::vector<std::vector<double>> values) {
    if (values.empty() || values.front().empty())
        throw std::invalid_argument("RadialField: empty samples");
    check_samples(radii, values, values.front().size());
    RadialField f;
    f.kind_ = Kind::Sampled;
    f.dim_ = 2;
    f.radii_ = std::move(radii);
    f.values_ = std::move(values);
    return f;
}

RadialField RadialField::sampled3(std::vector<double> radii,
                                  std::vector<std::vector<double>> values, int n_lat, int n_lon) {
    if (n_lat < 2 || n_lon < 4)
        throw std::invalid_argument("RadialField: need n_lat >= 2 and n_lon >= 4");
    check_samples(radii, values, static_cast<size_t>(n_lat) * static_cast<size_t>(n_lon));
    RadialField f;
    f.kind_ = Kind::Sampled;
    f.dim_ = 3;
    f.radii_ = std::move(radii);
    f.values_ = std::move(values);
    f.n_lat_ = n_lat;
    f.n_lon_ = n_lon;
    std::vector<double> nodes;
    gauss_legendre(n_lat, nodes, f.gl_w_);
    return f;
}

RadialField RadialField::sample(int dim, const std::function<double(const std::vector<double>&)>& f,
                                int n_radii, int n_ang) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("RadialField: sampling supports dimensions 2 and 3 only");
    const std::vector<double> radii = log_grid(1e-5, 1.0 - 1e-9, n_radii);
    std::vector<std::vector<double>> values;
    values.reserve(radii.size());
    if (dim == 2) {
        const int m = n_ang > 0 ? n_ang : 256;
        for (double r : radii) {
            std::vector<double> row(static_cast<size_t>(m));
            for (int j = 0; j < m; ++j) {
                const double th = 2 * std::numbers::pi * j / m;
                row[static_cast<size_t>(j)] = f({r * std::cos(th), r * std::sin(th)});
            }
            values.push_back(std::move(row));
        }
        return sampled2(radii, std::move(values));
    }
    const int n_lat = n_ang > 0 ? n_ang : 64;
    const int n_lon = 2 * n_lat;
    std::vector<double> nodes, weights;
    gauss_legendre(n_lat, nodes, weights);
    for (double r : radii) {
        std::vector<double> row(static_cast<size_t>(n_lat) * static_cast<size_t>(n_lon));
        for (int l = 0; l < n_lat; ++l) {
            const double u = nodes[static_cast<size_t>(l)]; // cos(colatitude)
            const double s = std::sqrt(std::max(0.0, 1 - u * u));
            for (int j = 0; j < n_lon; ++j) {
                const double th = 2 * std::numbers::pi * j / n_lon;
                row[static_cast<size_t>(l) * static_cast<size_t>(n_lon) + static_cast<size_t>(j)] =
                    f({r * s * std::cos(th), r * s * std::sin(th), r * u});
            }
        }
        values.push_back(std::move(row));
    }
    return sampled3(radii, std::move(values), n_lat, n_lon);
}

double RadialField::radial_value(double r) const {
    switch (kind_) {
    case Kind::Constant: return c_;
    case Kind::Power: return c_ * std::pow(r, -a_);
    case Kind::LogPower: return c_ * std::pow(std::max(1.0, std::log(1.0 / r)), a_);
    default:
        throw std::invalid_argument("RadialField: sampled fields have no radial closed form");
    }
}

double RadialField::sphere_mean(double r, const std::function<double(double)>& g) const {
    if (!(r > 0) || !(r < 1))
        throw std::invalid_argument("RadialField: sphere radius must lie in (0, 1)");
    if (kind_ != Kind::Sampled)
        return g(radial_value(r));

    // locate the radial cell and interpolate in log r
    const double rc = std::clamp(r, radii_.front(), radii_.back());
    const auto it = std::upper_bound(radii_.begin(), radii_.end(), rc);
    size_t i1 = std::min(radii_.size() - 1,
                         static_cast<size_t>(std::max<std::ptrdiff_t>(1, it - radii_.begin())));
    const size_t i0 = i1 - 1;
    const double w = std::clamp((std::log(rc) - std::log(radii_[i0])) /
                                    (std::log(radii_[i1]) - std::log(radii_[i0])),
                                0.0, 1.0);
    const std::vector<double>& lo = values_[i0];
    const std::vector<double>& hi = values_[i1];

    if (dim_ == 2) {
        double sum = 0;
        for (size_t j = 0; j < lo.size(); ++j)
            sum += g(lo[j] + w * (hi[j] - lo[j]));
        return sum / static_cast<double>(lo.size());
    }
    double sum = 0;
    for (int l = 0; l < n_lat_; ++l) {
        double ring = 0;
        for (int j = 0; j < n_lon_; ++j) {
            const size_t idx = static_cast<size_t>(l) * static_cast<size_t>(n_lon_) + static_cast<size_t>(j);
            ring += g(lo[idx] + w * (hi[idx] - lo[idx]));
        }
        sum += gl_w_[static_cast<size_t>(l)] * ring / n_lon_;
    }
    return sum / 2.0; // GL weights on [-1,1] sum to 2
}

double RadialField::sphere_mean(double r) const {
    return sphere_mean(r, [](double x) { return x; });
}

double RadialField::sphere_mean_at_log(double s, const std::function<double(double)>& g) const {
    if (!(s > 0))
        throw std::invalid_argument("RadialField: need s > 0");
    switch (kind_) {
    case Kind::Constant: return g(c_);
    case Kind::Power: return g(c_ * std::exp(a_ * s));
    case Kind::LogPower: return g(c_ * std::pow(std::max(1.0, s), a_));
    default: {
        const double r = std::max(std::exp(-s), radii_.front());
        return sphere_mean(r, g);
    }
    }
}

double RadialField::sphere_mean_at_log(double s) const {
    return sphere_mean_at_log(s, [](double x) { return x; });
}

double RadialField::log_radial_value_at_log(double s) const {
    switch (kind_) {
    case Kind::Constant: return std::log(c_);
    case Kind::Power: return std::log(c_) + a_ * s;
    case Kind::LogPower: return std::log(c_) + a_ * std::log(std::max(1.0, s));
    default:
        throw std::invalid_argument("RadialField: sampled fields have no radial closed form");
    }
}

std::string RadialField::describe() const {
    char buf[120];
    switch (kind_) {
    case Kind::Constant: std::snprintf(buf, sizeof buf, "constant(%g) in dim %d", c_, dim_); break;
    case Kind::Power: std::snprintf(buf, sizeof buf, "%g r^-%g in dim %d", c_, a_, dim_); break;
    case Kind::LogPower:
        std::snprintf(buf, sizeof buf, "%g max(1, log 1/r)^%g in dim %d", c_, a_, dim_);
        break;
    default:
        std::snprintf(buf, sizeof buf, "sampled %zu radii in dim %d", radii_.size(), dim_);
        break;
    }
    return buf;
}

} // namespace qlab
