#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qlab {

/// Outcome of a numerical divergence test.
enum class Verdict { Divergent, Convergent, Inconclusive };

const char* to_string(Verdict v);

/// Result of adaptive quadrature over a finite interval.
struct QuadResult {
    double value = 0;
    double error = 0;      ///< absolute error estimate
    bool converged = true; ///< false when the refinement budget ran out
};

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [a,b].
/// Intervals with b/a >= 4 start from log-spaced panels.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-9, double abs_tol = 1e-300);

struct DyadicOptions {
    int k_max = 40;                 ///< blocks [a 2^k, a 2^{k+1}], k = 0..k_max
    int window = 5;                 ///< trailing blocks examined by the verdict rule
    double divergence_floor = 1e-4; ///< trailing blocks must exceed this to certify divergence
    double decay_ratio = 0.9;       ///< b_{k+1}/b_k at or below this certifies decay
    double vanish_floor = 1e-12;    ///< relative level at which blocks count as exhausted
    double rel_tol = 1e-9;          ///< per-block quadrature tolerance
};

/// Behaviour of an improper integral explored over dyadic blocks.
///
/// Verdict rule on the trailing window (magnitudes of block sums):
///  - every block at the vanish floor            -> Convergent (tail 0)
///  - every ratio b_{k+1}/b_k <= decay_ratio     -> Convergent, geometric tail estimate
///  - every block above the divergence floor and
///    non-decreasing within 1 - decay_ratio      -> Divergent
///  - otherwise                                  -> Inconclusive
struct BlockSeries {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<double> blocks;
    double sum = 0;   ///< finite part: sum of computed blocks
    double tail = 0;  ///< geometric tail estimate (Convergent only)
    double error = 0; ///< accumulated quadrature error estimate
    std::string note;

    /// sum + tail, or +infinity when Divergent.
    double total() const;
};

/// Dyadic blocks marching up from a: [a 2^k, a 2^{k+1}].
BlockSeries integrate_dyadic_up(const std::function<double(double)>& f, double a,
                                const DyadicOptions& opt = {});

/// Mirrored blocks marching down toward 0 from b: [b 2^{-k-1}, b 2^{-k}].
BlockSeries integrate_dyadic_down(const std::function<double(double)>& f, double b,
                                  const DyadicOptions& opt = {});

/// Like integrate_dyadic_up but with a caller-supplied per-block integral.
BlockSeries classify_blocks(const std::function<double(double, double)>& block_integral,
                            double a, bool upward, const DyadicOptions& opt = {});

/// inf{ t >= 0 : f(t) >= tau } for a non-decreasing f, by geometrically grown
/// bracket and bisection; +infinity when the super-level set stays empty
/// below 1e300.
double monotone_superlevel_inf(const std::function<double(double)>& f, double tau,
                               double rel_tol = 1e-10);

/// count log-spaced points from a to b inclusive (a, b > 0).
std::vector<double> log_grid(double a, double b, int count);

} // namespace qlab
