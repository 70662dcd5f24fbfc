#include "qlab/mean_inequality.hpp"
#include "qlab/modulus.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

using namespace qlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("dimension constants") {
    const DimensionConstants c2 = dimension_constants(2);
    CHECK(c2.sphere_area == doctest::Approx(2 * kPi).epsilon(1e-15));
    CHECK(c2.ball_volume == doctest::Approx(kPi).epsilon(1e-15));
    const DimensionConstants c3 = dimension_constants(3);
    CHECK(c3.sphere_area == doctest::Approx(4 * kPi).epsilon(1e-15));
    CHECK(c3.ball_volume == doctest::Approx(4 * kPi / 3).epsilon(1e-15));
    for (int n = 2; n <= 10; ++n) {
        const DimensionConstants c = dimension_constants(n);
        CHECK(c.sphere_area == n * c.ball_volume);
    }
    CHECK_THROWS_AS(dimension_constants(1), std::invalid_argument);
}

TEST_CASE("ring modulus") {
    CHECK(ring_modulus(1.0, std::numbers::e, 2) == doctest::Approx(2 * kPi).epsilon(1e-14));
    CHECK(ring_modulus(1.0, std::numbers::e, 3) == doctest::Approx(4 * kPi).epsilon(1e-14));
    double prev = ring_modulus(1.0, 2.0, 3);
    for (double R : {4.0, 16.0, 1e4, 1e12, 1e100}) {
        const double m = ring_modulus(1.0, R, 3);
        CHECK(m < prev);
        prev = m;
    }
    CHECK(prev < 1e-3);
    CHECK_THROWS_AS(ring_modulus(1.0, 1.0, 2), std::invalid_argument);
}

TEST_CASE("spherical norms") {
    CHECK(spherical_norm(RadialField::constant(1, 2), 0.5) == doctest::Approx(kPi).epsilon(1e-13));
    for (double r : {0.2, 0.7})
        CHECK(spherical_norm(RadialField::constant(1, 3), r) ==
              doctest::Approx(std::sqrt(4 * kPi * r * r)).epsilon(1e-12));
    // Q = 1/|x| in the plane: the norm is constant 2 pi
    for (double r : {0.1, 0.5, 0.9})
        CHECK(spherical_norm(RadialField::radial_power(1, 1, 2), r) ==
              doctest::Approx(2 * kPi).epsilon(1e-12));
    // positively homogeneous in the field
    for (double c : {0.5, 3.0, 11.0})
        CHECK(spherical_norm(RadialField::constant(c, 4), 0.3) ==
              doctest::Approx(c * spherical_norm(RadialField::constant(1, 4), 0.3))
                  .epsilon(1e-12));
}

TEST_CASE("boundary caps in the plane") {
    // arc of |x - x0| = r inside the unit disc, |x0| = 1: length 2 r acos(r/2)
    const RadialField one = RadialField::constant(1, 2);
    CHECK(spherical_norm(one, 1.0, NormCenter::Boundary2) ==
          doctest::Approx(2 * std::acos(0.5)).epsilon(1e-13));
    CHECK(spherical_norm(one, 0.1, NormCenter::Boundary2) ==
          doctest::Approx(0.2 * std::acos(0.05)).epsilon(1e-13));
    CHECK(norm_divergence(one, 0.5, NormCenter::Boundary2).verdict == Verdict::Divergent);
    CHECK_THROWS_AS(spherical_norm(RadialField::constant(1, 3), 0.5, NormCenter::Boundary2),
                    std::invalid_argument);
}

TEST_CASE("norm divergence verdicts") {
    CHECK(norm_divergence(RadialField::constant(1, 2), 0.5).verdict == Verdict::Divergent);
    CHECK(norm_divergence(RadialField::radial_power(1, 1, 2), 0.5).verdict ==
          Verdict::Convergent);
    for (int n : {3, 5})
        CHECK(norm_divergence(RadialField::constant(1, n), 0.5).verdict == Verdict::Divergent);
}

TEST_CASE("norm profile tabulates and classifies") {
    const NormProfile prof = norm_profile(RadialField::constant(1, 2), 0.5, 16);
    REQUIRE(prof.radii.size() == 16);
    for (size_t i = 0; i < prof.radii.size(); ++i)
        CHECK(prof.norms[i] == doctest::Approx(2 * kPi * prof.radii[i]).epsilon(1e-12));
    CHECK(prof.divergence.verdict == Verdict::Divergent);
}

TEST_CASE("finite-energy fields under a divergent map still force norm divergence") {
    // Q with Phi(Q^{n-1}) ~ 1/r near 0 has finite energy for Phi = e^t, and
    // the extension criterion diverges for that Phi, so the norm integral
    // must diverge too.
    const MonotoneMap exp_map = MonotoneMap::exp_power(1, 1, 1);
    const RadialField Q = RadialField::radial_log_power(1, 1, 2);
    const double energy = ball_mean(Q, exp_map); // n = 2: Q^{n-1} = Q
    CHECK(energy == doctest::Approx(std::numbers::e + 1 / std::numbers::e).epsilon(1e-9));
    CHECK(norm_divergence(Q, 0.3).verdict == Verdict::Divergent);
}
