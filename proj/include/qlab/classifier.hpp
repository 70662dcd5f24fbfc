#pragma once

#include "qlab/monotone.hpp"
#include "qlab/quadrature.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qlab {

/// Identifiers of the integral conditions handled by the classifier.
///   C24  int_delta^inf H_p'(t) dt/t
///   C25  int_delta^inf dH_p(t)/t           (Lebesgue-Stieltjes)
///   C26  int_delta^inf H_p(t) dt/t^2
///   C27  int_0^delta H_p(1/t) dt
///   C28  int_eta*^inf d eta / H_p^{-1}(eta)
///   C29  int_tau*^inf d tau / (tau Phi_p^{-1}(tau))
///   T42  int_d0^inf  d tau / (tau [Phi^{-1}(tau)]^{1/(n-1)})   (extension criterion)
///   L51  int_tau*^inf d tau / (tau phi^{-1}(tau))              (counterexample hypothesis)
/// with H_p = log Phi_p and Phi_p(t) = Phi(t^p).
enum class ConditionTag { C24, C25, C26, C27, C28, C29, T42, L51 };

const char* to_string(ConditionTag tag);

struct ConditionKind {
    ConditionTag tag = ConditionTag::C29;
    double p = 1;                ///< exponent for C24..C29
    int n = 2;                   ///< dimension for T42 (p = n-1)
    std::optional<double> lower; ///< delta / delta0 / delta_* (eta_* for C28)

    static ConditionKind c24(double p, std::optional<double> lower = {});
    static ConditionKind c25(double p, std::optional<double> lower = {});
    static ConditionKind c26(double p, std::optional<double> lower = {});
    static ConditionKind c27(double p, std::optional<double> lower = {});
    static ConditionKind c28(double p, std::optional<double> lower = {});
    static ConditionKind c29(double p, std::optional<double> lower = {});
    static ConditionKind t42(int n, std::optional<double> lower = {});
    static ConditionKind l51(std::optional<double> lower = {});
};

struct ConditionReport {
    ConditionKind kind;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<double> block_sums;
    double head = 0;         ///< finite piece below the first dyadic block
    double tail_estimate = 0;
    double lower_used = 0;   ///< lower limit actually used, in `space` coordinates
    std::string space;       ///< "t", "t toward 0", or "log tau"
    std::string note;

    /// head + block sums + tail estimate; +infinity when Divergent.
    double total() const;
};

struct ClassifyOptions {
    int k_max = 40;
    double rel_tol = 1e-9;
};

/// Decide whether the condition integral diverges. Value-space conditions
/// (C28, C29, T42, L51) are integrated in eta = log tau, which the
/// substitution eta = log tau maps onto one another exactly and which keeps
/// log-type tails resolvable inside the dyadic window.
ConditionReport classify(const MonotoneMap& phi, const ConditionKind& kind,
                         const ClassifyOptions& opt = {});

struct EquivalenceReport {
    std::vector<ConditionReport> reports; ///< C24..C29 in order
    bool consistent = true;               ///< non-Inconclusive verdicts agree
    bool convexity_warning = false;       ///< equivalence not guaranteed
    ConvexityReport convexity;
};

/// Classify C24..C29 at compatible default limits and cross-check agreement.
EquivalenceReport classify_all_equivalent(const MonotoneMap& phi, double p,
                                          const ClassifyOptions& opt = {});

/// Closed-form ground truth for the analytic families:
/// power and affine maps converge for every condition; exp_power(alpha,
/// beta) diverges exactly when beta * p_eff >= 1 (p_eff = p, n-1 for T42,
/// 1 for L51). Tables are not supported.
Verdict analytic_oracle(const MonotoneMap& phi, const ConditionKind& kind);

} // namespace qlab
