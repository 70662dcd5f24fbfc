#pragma once

#include "qlab/monotone.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qlab {

struct CriterionResult {
    std::string id;
    bool pass = false;
    std::string detail; ///< deterministic: no timings, %.17g numbers
};

struct SuiteResult {
    std::uint64_t seed = 0;
    std::vector<CriterionResult> items;
    bool all_pass = false;
};

struct SuiteOptions {
    std::uint64_t seed = 20260809;
    /// When set, the determinism criterion shells out to this qlab binary
    /// twice and byte-compares the JSON; otherwise it recomputes a
    /// deterministic payload in process.
    std::string qlab_binary;
};

/// Run the full verification battery; items are deterministic for a fixed
/// seed.
SuiteResult run_acceptance_suite(const SuiteOptions& opt = {});

/// Deterministic JSON rendering with tool version and config echo.
std::string suite_json(const SuiteResult& res);

/// Random convex piecewise-linear map (non-decreasing slopes, occasional
/// blow-up knot); shared by the suite and the tests.
MonotoneMap random_convex_pwl(std::mt19937_64& rng);

} // namespace qlab
