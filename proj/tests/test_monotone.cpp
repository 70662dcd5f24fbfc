#include "qlab/monotone.hpp"
#include "qlab/quadrature.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>
#include <random>

using namespace qlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// a spread of maps across the families, some with jumps and blow-ups
std::vector<MonotoneMap> sample_maps() {
    std::vector<MonotoneMap> maps;
    maps.push_back(MonotoneMap::power(1, 2));
    maps.push_back(MonotoneMap::power(3, 0.5));
    maps.push_back(MonotoneMap::exp_power(1, 1, 1));
    maps.push_back(MonotoneMap::exp_power(0.5, 2));
    maps.push_back(MonotoneMap::affine(2, 1));
    maps.push_back(MonotoneMap::affine(0, 5));
    maps.push_back(MonotoneMap::pwl({{0, 1, 2, 4}, {0, 0.5, 0.5, 9}, false, kInf}));
    maps.push_back(MonotoneMap::pwl({{0, 1}, {0, 5}, true, kInf}));
    maps.push_back(MonotoneMap::pwl({{0, 1, 2}, {1, 2, 3}, false, 3.0}));
    return maps;
}

std::vector<double> probe_points() {
    return {0.0, 1e-6, 0.3, 0.99, 1.0, 1.7, 2.0, 3.5, 10.0, 123.0, 1e6};
}

} // namespace

TEST_CASE("evaluation matches the closed forms") {
    CHECK(MonotoneMap::power(1, 2)(3.0) == 9.0);
    CHECK(MonotoneMap::affine(0, 5)(7.0) == 5.0);
    CHECK(MonotoneMap::exp_power(1, 1, 1)(2.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
    for (const auto& phi : sample_maps())
        CHECK(phi(kInf) == phi.value_at_inf());
}

TEST_CASE("generalized inverse closed forms") {
    CHECK(MonotoneMap::power(1, 2).inverse(4.0) == doctest::Approx(2.0).epsilon(1e-14));
    const MonotoneMap constant = MonotoneMap::affine(0, 5);
    CHECK(constant.inverse(3.0) == 0.0);
    CHECK(std::isinf(constant.inverse(6.0)));
    const MonotoneMap step = MonotoneMap::pwl({{0, 1}, {0, 5}, true, kInf});
    CHECK(step.inverse(3.0) == 1.0);
    CHECK(step.inverse(0.0) == 0.0);
}

TEST_CASE("power composition") {
    const MonotoneMap phi = MonotoneMap::power(1, 2);
    const MonotoneMap phi3 = phi.power_compose(3);
    CHECK(phi3(2.0) == doctest::Approx(64.0).epsilon(1e-14));
    const MonotoneMap phi1 = phi.power_compose(1);
    for (double t : probe_points())
        if (std::isfinite(t))
            CHECK(phi1(t) == phi(t));
    // inverse of the composed map equals [inverse]^{1/p}
    const MonotoneMap phi2 = phi.power_compose(2);
    CHECK(phi2.inverse(16.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(phi2.inverse(16.0) ==
          doctest::Approx(std::pow(phi.inverse(16.0), 0.5)).epsilon(1e-12));
}

TEST_CASE("log transform") {
    const MonotoneMap exp_map = MonotoneMap::exp_power(1, 1, 1); // exactly e^t
    const LogMap H = log_transform(exp_map, 1);
    for (double t : {0.1, 0.5, 1.0, 3.0, 20.0, 500.0})
        CHECK(H(t) == doctest::Approx(t).epsilon(1e-12));

    const MonotoneMap flat = MonotoneMap::pwl({{0, 1, 2}, {0, 0, 4}, false, kInf});
    CHECK(flat.log_value(0.5) == -kInf);

    for (const auto& phi : sample_maps()) {
        const LogMap Hp = log_transform(phi, 2);
        for (double t : {0.5, 1.5, 4.0}) {
            const double eta = Hp(t);
            if (std::isfinite(eta))
                CHECK(Hp.inverse(eta) <= t * (1 + 1e-9));
        }
    }
}

TEST_CASE("log_value stays finite where the plain value overflows") {
    const MonotoneMap fast = MonotoneMap::exp_power(2, 1.5);
    const double t = 1e4;
    CHECK(std::isinf(fast(t)));
    CHECK(fast.log_value(t) == doctest::Approx(2 * std::pow(t, 1.5)).epsilon(1e-9));
    CHECK(std::isfinite(MonotoneMap::power(1, 3).log_value(1e200)));
}

TEST_CASE("inverse_at_exp far beyond double range") {
    const MonotoneMap exp_map = MonotoneMap::exp_power(1, 1);
    CHECK(exp_map.inverse_at_exp(1e6) == doctest::Approx(1e6).epsilon(1e-9));
    const MonotoneMap pow_map = MonotoneMap::power(2, 4);
    // inverse(tau) = (tau/2)^{1/4}; at tau = e^2000 that is e^{(2000 - log 2)/4}
    CHECK(pow_map.inverse_at_exp(2000.0) ==
          doctest::Approx(std::exp((2000.0 - std::log(2.0)) / 4)).epsilon(1e-9));
    for (const auto& phi : sample_maps()) {
        for (double eta : {-3.0, 0.0, 2.0, 5.0}) {
            const double direct = phi.inverse(std::exp(eta));
            const double stable = phi.inverse_at_exp(eta);
            if (std::isinf(direct))
                CHECK(std::isinf(stable));
            else
                CHECK(stable == doctest::Approx(direct).epsilon(1e-10));
        }
    }
}

TEST_CASE("convexity check") {
    const std::vector<double> grid = default_convexity_grid();
    CHECK(check_convex(MonotoneMap::power(1, 2), grid).ok());
    CHECK(check_convex(MonotoneMap::affine(2, 1), grid).ok());
    const ConvexityReport bad = check_convex(MonotoneMap::power(1, 0.5), grid);
    CHECK_FALSE(bad.ok());
    CHECK(bad.worst_gap > 0);
    CHECK(bad.worst_t2 > bad.worst_t1);
}

TEST_CASE("tau0 and the zero plateau") {
    CHECK(MonotoneMap::power(1, 2).tau0() == 0.0);
    CHECK(MonotoneMap::exp_power(1, 1, 1).tau0() == 1.0);
    CHECK(MonotoneMap::affine(0, 5).tau0() == 5.0);
    const MonotoneMap flat = MonotoneMap::pwl({{0, 1, 2}, {0, 0, 4}, false, kInf});
    CHECK(flat.zero_plateau_end() == 1.0);
    const MonotoneMap step = MonotoneMap::pwl({{0, 1}, {0, 5}, true, kInf});
    CHECK(step.zero_plateau_end() == 1.0);
    CHECK(MonotoneMap::affine(0, 0).zero_plateau_end() == kInf);
}

TEST_CASE("blow-up tables") {
    const MonotoneMap blow = MonotoneMap::pwl({{0, 1, 2}, {1, 2, 3}, false, 3.0});
    CHECK(std::isinf(blow(3.0)));
    CHECK(std::isinf(blow(10.0)));
    CHECK(blow(2.5) == doctest::Approx(3.5));
    CHECK(blow.inverse(kInf) == 3.0);
    CHECK(blow.blowup_point() == 3.0);
    CHECK(blow.inverse(1e9) == 3.0); // only the blow-up reaches that level
}

TEST_CASE("construction rejects malformed tables") {
    CHECK_THROWS_AS(MonotoneMap::pwl({{0, 1}, {2, 1}, false, kInf}), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneMap::pwl({{1, 1}, {0, 2}, false, kInf}), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneMap::pwl({{0, 2}, {0, 1}, false, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneMap::power(-1, 2), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneMap::exp_power(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneMap::affine(-1, 0), std::invalid_argument);
}

TEST_CASE("identity floor") {
    const MonotoneMap floored = MonotoneMap::power(1, 2).identity_floored();
    CHECK(floored(0.5) == 0.5);
    CHECK(floored(2.0) == 4.0);
    CHECK(floored(1.0) == 1.0);
    CHECK(floored.inverse(0.25) == 0.25);
    CHECK(floored.inverse(9.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(floored.power_compose(2), std::invalid_argument);
}

TEST_CASE("inverse properties on sampled maps") {
    std::mt19937_64 rng(42);
    auto uniform = [&](double a, double b) {
        return a + (b - a) * std::generate_canonical<double, 53>(rng);
    };
    for (const auto& phi : sample_maps()) {
        // monotone in tau
        double prev = phi.inverse(0.0);
        for (double tau : {0.1, 0.7, 1.0, 2.5, 5.0, 50.0, 1e4}) {
            const double inv = phi.inverse(tau);
            CHECK(inv >= prev - 1e-12);
            prev = inv;
        }
        for (double t : probe_points()) {
            if (!std::isfinite(t))
                continue;
            // inverse(value(t)) <= t; skip values saturated to infinity by
            // double overflow (a genuine blow-up still has a finite inverse)
            const double v = phi(t);
            if (!std::isinf(v) || phi.blowup_point())
                CHECK(phi.inverse(v) <= t * (1 + 1e-10) + 1e-12);
            // half-Galois: value(t) >= tau implies inverse(tau) <= t
            const double tau = uniform(0.0, 10.0);
            if (v >= tau)
                CHECK(phi.inverse(tau) <= t * (1 + 1e-10) + 1e-12);
        }
    }
}

TEST_CASE("strictly increasing analytic families invert exactly") {
    for (const auto& phi : {MonotoneMap::power(2, 1.7), MonotoneMap::exp_power(0.7, 1.3, 0.2),
                            MonotoneMap::affine(3, 0.5)}) {
        for (double t : {0.2, 1.0, 2.4, 17.0})
            CHECK(phi.inverse(phi(t)) == doctest::Approx(t).epsilon(1e-10));
    }
}

TEST_CASE("inverse of the power composition is the fractional power of the inverse") {
    for (const auto& phi : sample_maps()) {
        for (double p : {0.5, 2.0, 3.0}) {
            const MonotoneMap phi_p = phi.power_compose(p);
            for (double tau : {0.4, 1.0, 3.0, 12.0, 400.0}) {
                const double lhs = phi_p.inverse(tau);
                const double rhs = std::pow(phi.inverse(tau), 1.0 / p);
                if (std::isinf(lhs))
                    CHECK(std::isinf(rhs));
                else
                    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("closed-form inverses agree with the bisection oracle") {
    for (const auto& phi : sample_maps()) {
        for (double tau : {0.3, 1.0, 2.0, 4.5, 8.0, 120.0}) {
            const double closed = phi.inverse(tau);
            const double oracle =
                monotone_superlevel_inf([&](double t) { return phi(t); }, tau, 1e-12);
            if (std::isinf(closed))
                CHECK(std::isinf(oracle));
            else if (closed > 1e-12)
                CHECK(oracle == doctest::Approx(closed).epsilon(1e-8));
            else
                CHECK(oracle <= 1e-8);
        }
    }
}
