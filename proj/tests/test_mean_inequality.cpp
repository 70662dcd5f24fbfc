#include "qlab/mean_inequality.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

using namespace qlab;

namespace {

RadialField tilted_field_2d(double base) {
    // K(x) = base + x1, sampled on the default grid
    return RadialField::sample(2, [base](const std::vector<double>& x) { return base + x[0]; });
}

} // namespace

TEST_CASE("spherical averages") {
    const RadialField inv_r = RadialField::radial_power(1, 1, 2);
    CHECK(inv_r.sphere_mean(0.25) == doctest::Approx(4.0).epsilon(1e-14));
    const RadialField c = RadialField::constant(3.5, 3);
    for (double r : {0.1, 0.5, 0.9})
        CHECK(c.sphere_mean(r) == 3.5);
    // the cosine averages out around the circle
    CHECK(tilted_field_2d(1.0).sphere_mean(0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampled three-dimensional fields average correctly") {
    // K(x) = 1 + x3^2: mean over the sphere of radius r is 1 + r^2/3
    const RadialField f = RadialField::sample(3, [](const std::vector<double>& x) {
        return 1.0 + x[2] * x[2];
    });
    // the angular rule is exact here; the tolerance absorbs the radial
    // interpolation between sample rows
    CHECK(f.sphere_mean(0.6) == doctest::Approx(1.0 + 0.36 / 3).epsilon(2e-3));
    CHECK_THROWS_AS(RadialField::sample(4, [](const std::vector<double>&) { return 1.0; }),
                    std::invalid_argument);
}

TEST_CASE("ball means") {
    CHECK(ball_mean(RadialField::radial_power(1, 1, 2), MonotoneMap::identity()) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(ball_mean(RadialField::constant(4, 2), MonotoneMap::identity()) ==
          doctest::Approx(4.0).epsilon(1e-10));
    CHECK(ball_mean(RadialField::constant(1, 3), MonotoneMap::power(1, 2)) ==
          doctest::Approx(1.0).epsilon(1e-10));
    // 1/|x|^2 in the plane is not integrable
    CHECK(std::isinf(ball_mean(RadialField::radial_power(1, 1, 2), MonotoneMap::power(1, 2))));
}

TEST_CASE("hand-computable verification record") {
    const VerificationRecord rec =
        verify_lemma31(RadialField::radial_power(1, 1, 2), MonotoneMap::identity(), 1.0);
    CHECK(rec.pass);
    CHECK(rec.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rec.mean == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rec.rhs == doctest::Approx(1.0 / (4 * std::numbers::e)).epsilon(1e-8));
}

TEST_CASE("infinite mean short-circuits to a vacuous pass") {
    const VerificationRecord rec =
        verify_lemma31(RadialField::radial_power(1, 1, 2), MonotoneMap::power(1, 2), 1.0);
    CHECK(rec.pass);
    CHECK(rec.vacuous);
    CHECK(rec.rhs == 0.0);
    CHECK(rec.lhs == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("constant fields give a divergent left side") {
    const VerificationRecord rec =
        verify_lemma31(RadialField::constant(2, 2), MonotoneMap::power(1, 2), 1.0);
    CHECK(rec.pass);
    CHECK(std::isinf(rec.lhs));
}

TEST_CASE("the Jensen step holds for convex maps") {
    const RadialField f = tilted_field_2d(1.5);
    for (double r : {0.2, 0.5, 0.8})
        CHECK(jensen_gap(f, MonotoneMap::power(1, 2), r) >= -1e-12);
}

TEST_CASE("doubling the map doubles the mean and keeps the verdict") {
    const RadialField K = RadialField::radial_power(2, 0.5, 2);
    const VerificationRecord one = verify_lemma31(K, MonotoneMap::power(2, 2), 1.0);
    const VerificationRecord two = verify_lemma31(K, MonotoneMap::power(4, 2), 1.0);
    CHECK(two.mean == doctest::Approx(2 * one.mean).epsilon(1e-9));
    CHECK(two.lhs == doctest::Approx(one.lhs).epsilon(1e-12));
    // the right side is invariant under scaling (substitute tau -> 2 tau)
    CHECK(two.rhs == doctest::Approx(one.rhs).epsilon(1e-6));
    CHECK(one.pass);
    CHECK(two.pass);
}

TEST_CASE("randomized sweep stays inequality-clean") {
    const SweepResult res = lemma31_sweep(7, 25);
    CHECK(res.all_pass);
    CHECK(res.trials == 25);
    CHECK(res.jensen_failures == 0);
}
