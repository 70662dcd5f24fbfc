#include "qlab/extremal.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>
#include <numbers>

using namespace qlab;

namespace {
constexpr double kPi = std::numbers::pi;

const DistortionProfile& square_profile() {
    static const DistortionProfile prof = [] {
        const NormalizeResult norm = normalize_phi(MonotoneMap::power(1, 2));
        REQUIRE(norm.accepted());
        return solve_profile(*norm.map);
    }();
    return prof;
}
} // namespace

TEST_CASE("normalization accepts and rejects the right maps") {
    const NormalizeResult square = normalize_phi(MonotoneMap::power(1, 2));
    CHECK(square.accepted());
    CHECK((*square.map)(0.5) == 0.5);    // identity below 1
    CHECK((*square.map)(2.0) == 4.0);    // unchanged above 1
    CHECK(square.witness.C > 0);

    CHECK(normalize_phi(MonotoneMap::identity()).accepted());

    const NormalizeResult constant = normalize_phi(MonotoneMap::affine(0, 5));
    CHECK_FALSE(constant.accepted());
    CHECK(constant.reason.find("growth") != std::string::npos);

    // e^t: the inverse integral diverges, the extension theorem applies
    const NormalizeResult exp_map = normalize_phi(MonotoneMap::exp_power(1, 1, 1));
    CHECK_FALSE(exp_map.accepted());
    CHECK(exp_map.convergence->verdict == Verdict::Divergent);

    CHECK_THROWS_AS(ExtremalMap::build(MonotoneMap::exp_power(1, 1, 1), 2),
                    std::invalid_argument);
}

TEST_CASE("closed-form profile for the square map") {
    const DistortionProfile& prof = square_profile();
    CHECK(prof.gamma == 1.0);
    CHECK(prof.max_residual <= 1e-10);
    CHECK(prof.distortion_at(0.125) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(prof.distortion.back() == 1.0); // K(1) = 1

    // sandwich phi^{-1}(gamma/r) <= K(r) <= gamma/r on the grid
    for (size_t i = 0; i < prof.radii.size(); i += 97) {
        const double r = prof.radii[i];
        const double K = prof.distortion[i];
        CHECK(K <= prof.gamma / r * (1 + 1e-12));
        CHECK(K >= prof.phi.inverse(prof.gamma / r) * (1 - 1e-12));
    }

    // I(t) = 1.5 t^{2/3}
    CHECK(prof.accumulated.back() == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(prof.integral_at(0.125) == doctest::Approx(0.375).epsilon(1e-8));
    CHECK(prof.integral_at(1e-8) == doctest::Approx(1.5e-8 * std::pow(10.0, 8.0 / 3))
                                        .epsilon(1e-6)); // below the grid
    for (size_t i = 1; i < prof.accumulated.size(); ++i)
        CHECK(prof.accumulated[i] >= prof.accumulated[i - 1]);

    CHECK(prof.below_grid <= prof.below_grid_bound * (1 + 1e-9));
}

TEST_CASE("map evaluation") {
    const ExtremalMap map(2, square_profile());
    const std::vector<double> y = map(std::vector<double>{0.125, 0.0});
    CHECK(y[0] == doctest::Approx(std::exp(0.375)).epsilon(1e-9));
    CHECK(y[1] == 0.0);

    // direction preserved, image inside the ring
    const double R = map.outer_radius();
    CHECK(R == doctest::Approx(std::exp(1.5)).epsilon(1e-9));
    for (double r : {1e-5, 0.37, 0.93}) {
        const std::vector<double> x{r * 0.6, r * 0.8};
        const std::vector<double> fx = map(x);
        const double ratio = fx[0] / x[0];
        CHECK(fx[1] / x[1] == doctest::Approx(ratio).epsilon(1e-12));
        CHECK(ratio > 0);
        const double len = std::hypot(fx[0], fx[1]);
        CHECK(len > 1.0);
        CHECK(len < R);
    }

    CHECK_THROWS_AS(map(std::vector<double>{0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(map(std::vector<double>{1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(map(std::vector<double>{0.5}), std::invalid_argument);
}

TEST_CASE("distortions") {
    const ExtremalMap map(2, square_profile());
    const Distortions d = map.distortions(0.125);
    CHECK(d.outer == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(d.radial <= d.tangential);
    CHECK(d.tangential / d.radial == doctest::Approx(d.outer).epsilon(1e-12));
    // K -> 1 toward the boundary sphere
    CHECK(map.distortions(1 - 1e-8).outer == doctest::Approx(1.0).epsilon(1e-5));

    // finite differences of the map reproduce the outer dilatation
    const DistortionProfile& prof = map.profile();
    for (double r : {1e-3, 0.02, 0.2, 0.6, 0.89}) {
        const double h = 1e-4 * r;
        const double d_radial = (prof.scale_at(r + h) - prof.scale_at(r - h)) / (2 * h);
        const double d_tangent = prof.scale_at(r) / r;
        CHECK(d_tangent / d_radial == doctest::Approx(map.distortions(r).outer).epsilon(1e-5));
    }
}

TEST_CASE("energy and its bound") {
    const ExtremalMap map2(2, square_profile());
    const ExtremalMap::Energy e2 = map2.energy();
    CHECK(e2.value == doctest::Approx(3 * kPi).epsilon(1e-6));
    CHECK(e2.bound == doctest::Approx(3 * kPi).epsilon(1e-6)); // equality in the plane
    CHECK(e2.value <= e2.bound * (1 + 1e-6));

    const ExtremalMap map3(3, square_profile());
    const ExtremalMap::Energy e3 = map3.energy();
    CHECK(e3.value == doctest::Approx(12 * kPi / 5).epsilon(1e-6));
    CHECK(e3.bound == doctest::Approx(6 * kPi).epsilon(1e-6));
    CHECK(e3.value <= e3.bound);
}

TEST_CASE("boundary signature") {
    const ExtremalMap map(2, square_profile());
    const std::vector<double> probes{0.5, 1e-2, 1e-4, 1e-6, 1e-7};
    const ExtremalMap::BoundaryReport rep = map.boundary_report(probes);
    CHECK(rep.scale_monotone);
    CHECK(rep.oscillation_above_2);
    CHECK(rep.outer_radius == doctest::Approx(std::exp(1.5)).epsilon(1e-9));
    // rho(1e-6) = exp(1.5e-4)
    for (const auto& pr : rep.probes)
        if (pr.t == 1e-6)
            CHECK(pr.scale == doctest::Approx(std::exp(1.5e-4)).epsilon(1e-9));

    // radial limit: f(t eta) -> eta
    const std::vector<double> f = map(std::vector<double>{1e-8, 0.0});
    CHECK(std::hypot(f[0] - 1.0, f[1]) <= 1e-4);
}

TEST_CASE("identity map profile") {
    const NormalizeResult norm = normalize_phi(MonotoneMap::identity());
    REQUIRE(norm.accepted());
    const DistortionProfile prof = solve_profile(*norm.map, 512, 1e-4);
    // Psi(t) = t^2, gamma = 1: K(r) = 1/r and I(t) = t
    CHECK(prof.distortion_at(0.01) == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(prof.accumulated.back() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("jump tables cannot satisfy the functional equation") {
    const MonotoneMap step = MonotoneMap::pwl(
        {{0, 2}, {1, 100}, true, std::numeric_limits<double>::infinity()});
    CHECK_THROWS_AS(solve_profile(step.identity_floored(), 64, 0.05), std::runtime_error);
    CHECK_THROWS_AS(solve_profile(MonotoneMap::power(1, 2), 64, 0.05), std::invalid_argument);
}

TEST_CASE("sub-exponential map profile matches the frozen reference") {
    // reference computed with 25-digit arithmetic: bisect
    // K (e^{sqrt K} - 1) = (gamma/r)^2 and integrate 1/(r K) with an
    // asymptotic far tail
    const ExtremalMap map = ExtremalMap::build(MonotoneMap::exp_power(1, 0.5), 2);
    CHECK(map.gamma() == doctest::Approx(std::sqrt(std::numbers::e - 1)).epsilon(1e-14));
    CHECK(map.profile().accumulated.back() ==
          doctest::Approx(1.100669742053068).epsilon(1e-8));
    CHECK(map.outer_radius() == doctest::Approx(3.006178714183481).epsilon(1e-8));
}

TEST_CASE("profiles solve for maps without closed forms") {
    // sub-exponential growth keeps the inverse integral convergent
    const std::vector<MonotoneMap> maps = {
        MonotoneMap::exp_power(1, 0.5),
        MonotoneMap::pwl({{0, 1, 3}, {0, 1, 5}, false, std::numeric_limits<double>::infinity()}),
        MonotoneMap::affine(3, 1),
    };
    for (const auto& phi : maps) {
        const NormalizeResult norm = normalize_phi(phi);
        REQUIRE(norm.accepted());
        const DistortionProfile prof = solve_profile(*norm.map, 512, 1e-5);
        CHECK(prof.max_residual <= 1e-10);
        CHECK(prof.distortion.back() == 1.0);
        for (size_t i = 0; i < prof.radii.size(); i += 61) {
            const double r = prof.radii[i];
            const double K = prof.distortion[i];
            CHECK(K <= prof.gamma / r * (1 + 1e-12));
            CHECK(K >= prof.phi.inverse(prof.gamma / r) * (1 - 1e-12));
        }
        CHECK(std::isfinite(prof.accumulated.back()));
        CHECK(prof.below_grid <= prof.below_grid_bound * (1 + 1e-9));

        const ExtremalMap map(2, prof);
        const ExtremalMap::Energy e = map.energy();
        CHECK(e.value <= e.bound * (1 + 1e-6));
        CHECK(map.outer_radius() > 1.0);
        for (double r : {0.05, 0.4, 0.85}) {
            const double h = 1e-4 * r;
            const double d_radial = (prof.scale_at(r + h) - prof.scale_at(r - h)) / (2 * h);
            const double d_tangent = prof.scale_at(r) / r;
            CHECK(d_tangent / d_radial ==
                  doctest::Approx(map.distortions(r).outer).epsilon(1e-5));
        }
    }
}

TEST_CASE("accepted maps have a convergent inverse integral") {
    for (const auto& phi : {MonotoneMap::power(1, 2), MonotoneMap::identity(),
                            MonotoneMap::power(2, 3), MonotoneMap::affine(3, 1)}) {
        const NormalizeResult norm = normalize_phi(phi);
        REQUIRE(norm.accepted());
        CHECK(classify(phi, ConditionKind::l51()).verdict == Verdict::Convergent);
    }
}
