#pragma once

#include "qlab/fields.hpp"
#include "qlab/monotone.hpp"
#include "qlab/quadrature.hpp"

#include <cstdint>
#include <string>

namespace qlab {

/// Ball mean with divergence bookkeeping.
struct MeanEstimate {
    double value = 0;     ///< finite estimate; +inf when Divergent
    Verdict verdict = Verdict::Convergent;
    double error = 0;
};

/// Mean value of phi(K(x)) over the unit ball, computed as
/// n * int_0^1 [sphere mean of phi o K](r) r^{n-1} dr after r = e^{-s}.
MeanEstimate ball_mean_detailed(const RadialField& K, const MonotoneMap& phi);
double ball_mean(const RadialField& K, const MonotoneMap& phi);

/// sphere mean of phi o K minus phi(sphere mean of K) at radius r;
/// non-negative for convex phi.
double jensen_gap(const RadialField& K, const MonotoneMap& phi, double r);

/// Both sides of the spherical mean-value inequality
///   int_0^1 dr/(r k^{1/p}(r)) >= (1/n) int_{eM}^inf d tau/(tau [Phi^{-1}(tau)]^{1/p})
/// where k(r) is the sphere mean of K and M the ball mean of Phi o K.
struct VerificationRecord {
    double lhs = 0;
    double rhs = 0;
    double mean = 0; ///< M
    double p = 1;
    int n = 2;
    bool pass = false;
    bool vacuous = false; ///< M infinite or unresolved; rhs treated as 0
    double lhs_error = 0, rhs_error = 0, mean_error = 0;
    double lhs_tail_integrand = 0; ///< integrand at the lhs truncation point
    std::string note;
};

VerificationRecord verify_lemma31(const RadialField& K, const MonotoneMap& phi, double p,
                                  double tol_cmp = 1e-6);

/// Randomized inequality suite over (K, phi, p) draws.
struct SweepResult {
    int trials = 0;
    int passes = 0;
    int vacuous = 0;
    int jensen_checks = 0;
    int jensen_failures = 0;
    double worst_margin = 0; ///< min of (lhs - rhs)/max(rhs, tiny) over finite trials
    std::string worst_case;
    bool all_pass = false;
};

SweepResult lemma31_sweep(std::uint64_t seed, int trials);

} // namespace qlab
