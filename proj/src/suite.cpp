#include "qlab/suite.hpp"

#include "qlab/classifier.hpp"
#include "qlab/extremal.hpp"
#include "qlab/mean_inequality.hpp"
#include "qlab/modulus.hpp"
#include "qlab/version.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qlab {

namespace {

using nlohmann::ordered_json;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr double kPi = std::numbers::pi;

// ---- criterion 1/2: closed-form extremal construction --------------------

CriterionResult extremal_closed_form_n2() {
    CriterionResult res;
    res.id = "extremal-closed-form-n2";
    const auto t0 = std::chrono::steady_clock::now();
    const ExtremalMap map = ExtremalMap::build(MonotoneMap::power(1, 2), 2);
    const DistortionProfile& prof = map.profile();
    const double I1 = prof.accumulated.back();
    const double R = map.outer_radius();
    const ExtremalMap::Energy en = map.energy();
    const double elapsed = seconds_since(t0);

    double worst_k = 0;
    for (size_t i = 0; i < prof.radii.size(); ++i) {
        const double expected = std::pow(prof.radii[i], -2.0 / 3.0);
        worst_k = std::max(worst_k, std::fabs(prof.distortion[i] / expected - 1));
    }
    const double three_pi = 3 * kPi;
    const bool ok_gamma = std::fabs(prof.gamma - 1) <= 1e-12;
    const bool ok_resid = prof.max_residual <= 1e-10;
    const bool ok_k = worst_k <= 1e-8;
    const bool ok_i = std::fabs(I1 - 1.5) <= 1e-8;
    const bool ok_r = std::fabs(R - std::exp(1.5)) <= 1e-7;
    const bool ok_energy = std::fabs(en.value - three_pi) <= 1e-3 * three_pi;
    const bool ok_bound = std::fabs(en.bound - three_pi) <= 1e-7 &&
                          en.value <= en.bound * (1 + 1e-6);
    const bool ok_time = elapsed < 2.0;
    res.pass = ok_gamma && ok_resid && ok_k && ok_i && ok_r && ok_energy && ok_bound && ok_time;
    res.detail = fmt("gamma=%.17g resid=%.3g K_err=%.3g I1=%.17g R=%.17g energy=%.17g "
                     "bound=%.17g runtime<2s:%s",
                     prof.gamma, prof.max_residual, worst_k, I1, R, en.value, en.bound,
                     ok_time ? "yes" : "no");
    return res;
}

CriterionResult extremal_closed_form_n3() {
    CriterionResult res;
    res.id = "extremal-closed-form-n3";
    const auto t0 = std::chrono::steady_clock::now();
    const ExtremalMap map = ExtremalMap::build(MonotoneMap::power(1, 2), 3);
    const ExtremalMap::Energy en = map.energy();
    const double elapsed = seconds_since(t0);
    const double expect = 12 * kPi / 5;
    const double bound_expect = 6 * kPi;
    const bool ok_energy = std::fabs(en.value - expect) <= 1e-3 * expect;
    const bool ok_bound = en.value <= en.bound * (1 + 1e-6) &&
                          std::fabs(en.bound - bound_expect) <= 1e-6 * bound_expect;
    const bool ok_time = elapsed < 2.0;
    res.pass = ok_energy && ok_bound && ok_time;
    res.detail = fmt("energy=%.17g (12pi/5=%.17g) bound=%.17g runtime<2s:%s", en.value, expect,
                     en.bound, ok_time ? "yes" : "no");
    return res;
}

// ---- criterion 3: finite-difference dilatation ----------------------------

CriterionResult finite_difference_dilatation() {
    CriterionResult res;
    res.id = "finite-difference-dilatation";
    const ExtremalMap map = ExtremalMap::build(MonotoneMap::power(1, 2), 2);
    const DistortionProfile& prof = map.profile();
    const std::vector<double> radii = log_grid(1e-3, 0.9, 50);
    double worst = 0;
    for (double r : radii) {
        const double h = 1e-4 * r;
        const double rho_plus = prof.scale_at(r + h);
        const double rho_minus = prof.scale_at(r - h);
        const double d_radial = (rho_plus - rho_minus) / (2 * h);
        // tangential rate from two nearby points on the same sphere
        const double dth = 1e-4;
        const std::vector<double> f1 = map(std::vector<double>{r, 0.0});
        const std::vector<double> f2 =
            map(std::vector<double>{r * std::cos(dth), r * std::sin(dth)});
        const double chord = std::hypot(f2[0] - f1[0], f2[1] - f1[1]);
        const double d_tangent = chord / (r * 2 * std::sin(dth / 2));
        const double k_fd = d_tangent / d_radial;
        const double k_exact = map.distortions(r).outer;
        worst = std::max(worst, std::fabs(k_fd / k_exact - 1));
    }
    res.pass = worst <= 1e-5;
    res.detail = fmt("max |K_fd/K - 1| = %.3g over 50 radii in [1e-3, 0.9]", worst);
    return res;
}

// ---- criterion 4: non-extendability signature ------------------------------

CriterionResult boundary_signature() {
    CriterionResult res;
    res.id = "boundary-signature";
    const ExtremalMap map = ExtremalMap::build(MonotoneMap::power(1, 2), 2);
    const std::vector<double> probes = {0.5, 0.1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    const ExtremalMap::BoundaryReport rep = map.boundary_report(probes);
    bool window_ok = true;
    double scale_at_1e6 = 0;
    for (const auto& pr : rep.probes) {
        if (pr.t <= 1e-6)
            window_ok = window_ok && pr.scale > 1.0 && pr.scale < 1.0 + 1e-3;
        if (pr.t == 1e-6)
            scale_at_1e6 = pr.scale;
    }
    // radial limit: f(t eta) -> eta along the direction eta
    const double t_small = 1e-8;
    const std::vector<double> f = map(std::vector<double>{t_small, 0.0});
    const double radial_err = std::hypot(f[0] - 1.0, f[1]);
    res.pass = window_ok && rep.scale_monotone && rep.oscillation_above_2 && radial_err <= 1e-4;
    res.detail = fmt("rho(1e-6)=%.17g monotone:%s osc>2:%s |f(1e-8 e)-e|=%.3g R=%.17g",
                     scale_at_1e6, rep.scale_monotone ? "yes" : "no",
                     rep.oscillation_above_2 ? "yes" : "no", radial_err, rep.outer_radius);
    return res;
}

// ---- criterion 5: mean-value inequality ------------------------------------

CriterionResult mean_inequality_suite(std::uint64_t seed) {
    CriterionResult res;
    res.id = "mean-inequality-suite";
    const auto t0 = std::chrono::steady_clock::now();

    const VerificationRecord rec = verify_lemma31(RadialField::radial_power(1, 1, 2),
                                                  MonotoneMap::identity(), 1.0);
    const double quarter_e = 1.0 / (4 * std::numbers::e);
    const bool ok_closed = rec.pass && std::fabs(rec.lhs - 1.0) <= 1e-8 &&
                           std::fabs(rec.rhs - quarter_e) <= 1e-8 &&
                           std::fabs(rec.mean - 2.0) <= 1e-8;

    const SweepResult sweep = lemma31_sweep(seed, 100);
    const double elapsed = seconds_since(t0);
    const bool ok_time = elapsed < 30.0;
    res.pass = ok_closed && sweep.all_pass && ok_time;
    res.detail = fmt("closed case lhs=%.17g rhs=%.17g M=%.17g; sweep %d/%d pass "
                     "(%d vacuous, worst margin %.3g); jensen %d/%d; runtime<30s:%s",
                     rec.lhs, rec.rhs, rec.mean, sweep.passes, sweep.trials, sweep.vacuous,
                     sweep.worst_margin, sweep.jensen_checks - sweep.jensen_failures,
                     sweep.jensen_checks, ok_time ? "yes" : "no");
    return res;
}

// ---- criterion 6/8/9: classifier against the analytic oracle ---------------

std::vector<std::pair<std::string, MonotoneMap>> oracle_table() {
    std::vector<std::pair<std::string, MonotoneMap>> fams;
    fams.emplace_back("power(1,1)", MonotoneMap::power(1, 1));
    fams.emplace_back("power(1,2)", MonotoneMap::power(1, 2));
    fams.emplace_back("power(1,3)", MonotoneMap::power(1, 3));
    fams.emplace_back("exp_power(1,0.5)", MonotoneMap::exp_power(1, 0.5));
    fams.emplace_back("exp_power(1,1)", MonotoneMap::exp_power(1, 1));
    fams.emplace_back("exp_power(1,2)", MonotoneMap::exp_power(1, 2));
    fams.emplace_back("affine(2,1)", MonotoneMap::affine(2, 1));
    return fams;
}

std::vector<std::pair<std::string, ConditionKind>> oracle_kinds() {
    return {{"T42 n=2", ConditionKind::t42(2)},
            {"T42 n=3", ConditionKind::t42(3)},
            {"C29 p=1", ConditionKind::c29(1)},
            {"C29 p=2", ConditionKind::c29(2)}};
}

CriterionResult classifier_oracle_table() {
    CriterionResult res;
    res.id = "classifier-oracle-table";
    int cells = 0, agree = 0, inconclusive = 0, brute_agree = 0;
    std::string first_bad;
    for (const auto& [fname, phi] : oracle_table()) {
        for (const auto& [kname, kind] : oracle_kinds()) {
            ++cells;
            const Verdict oracle = analytic_oracle(phi, kind);
            // the oracle itself is validated against deeper brute-force blocks
            ClassifyOptions deep;
            deep.k_max = 60;
            const Verdict brute = classify(phi, kind, deep).verdict;
            if (brute == oracle)
                ++brute_agree;
            const Verdict got = classify(phi, kind).verdict;
            if (got == Verdict::Inconclusive)
                ++inconclusive;
            if (got == oracle)
                ++agree;
            else if (first_bad.empty())
                first_bad = fname + " / " + kname + ": got " + to_string(got) + ", oracle " +
                            to_string(oracle);
        }
    }
    res.pass = agree == cells && inconclusive == 0 && brute_agree == cells;
    res.detail = fmt("%d/%d agree, %d inconclusive, oracle pre-validated %d/%d", agree, cells,
                     inconclusive, brute_agree, cells);
    if (!first_bad.empty())
        res.detail += " [" + first_bad + "]";
    return res;
}

CriterionResult equivalence_random_tables(std::uint64_t seed) {
    CriterionResult res;
    res.id = "equivalence-random-tables";
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    int verdicts = 0, inconclusive = 0, disagreements = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const MonotoneMap phi = random_convex_pwl(rng);
        const Verdict v26 = classify(phi, ConditionKind::c26(1)).verdict;
        const Verdict v27 = classify(phi, ConditionKind::c27(1)).verdict;
        const Verdict v29 = classify(phi, ConditionKind::c29(1)).verdict;
        std::optional<Verdict> agreed;
        for (Verdict v : {v26, v27, v29}) {
            ++verdicts;
            if (v == Verdict::Inconclusive) {
                ++inconclusive;
                continue;
            }
            if (!agreed)
                agreed = v;
            else if (*agreed != v)
                ++disagreements;
        }
    }
    const double rate = static_cast<double>(inconclusive) / verdicts;
    res.pass = disagreements == 0 && rate <= 0.2;
    res.detail = fmt("20 convex tables: %d disagreements, %d/%d inconclusive", disagreements,
                     inconclusive, verdicts);
    return res;
}

CriterionResult divergence_monotone_in_p() {
    CriterionResult res;
    res.id = "divergence-monotone-in-p";
    const MonotoneMap phi = MonotoneMap::exp_power(1, 1);
    auto rank = [](Verdict v) {
        return v == Verdict::Convergent ? 0 : (v == Verdict::Inconclusive ? 1 : 2);
    };
    int prev = -1;
    bool ok = true;
    std::string seq;
    for (double p : {0.5, 1.0, 2.0, 4.0}) {
        const Verdict v = classify(phi, ConditionKind::c29(p)).verdict;
        ok = ok && rank(v) >= prev;
        prev = rank(v);
        seq += std::string(seq.empty() ? "" : ", ") + to_string(v);
    }
    res.pass = ok;
    res.detail = "exp_power(1,1) C29 over p in {0.5,1,2,4}: " + seq;
    return res;
}

CriterionResult mutual_exclusion() {
    CriterionResult res;
    res.id = "mutual-exclusion";
    int checks = 0, failures = 0;
    std::string first_bad;
    for (const auto& [fname, phi] : oracle_table()) {
        for (int n : {2, 3}) {
            ++checks;
            const Verdict t42 = classify(phi, ConditionKind::t42(n)).verdict;
            const MonotoneMap little_phi = n == 2 ? phi : phi.power_compose(n - 1);
            const NormalizeResult norm = normalize_phi(little_phi);
            bool ok;
            if (t42 == Verdict::Divergent) {
                ok = !norm.accepted();
            } else {
                ok = norm.accepted() &&
                     classify(little_phi, ConditionKind::l51()).verdict == Verdict::Convergent;
            }
            if (!ok) {
                ++failures;
                if (first_bad.empty())
                    first_bad = fname + fmt(" n=%d", n);
            }
        }
    }
    res.pass = failures == 0;
    res.detail = fmt("%d/%d exclusion checks hold", checks - failures, checks);
    if (!first_bad.empty())
        res.detail += " [" + first_bad + "]";
    return res;
}

// ---- criterion 10: modulus utilities ---------------------------------------

CriterionResult modulus_utilities() {
    CriterionResult res;
    res.id = "modulus-utilities";
    bool ok = true;
    std::string bad;
    // closed-form sphere areas for n = 2..10
    const double closed[] = {2 * kPi,
                             4 * kPi,
                             2 * kPi * kPi,
                             8 * kPi * kPi / 3,
                             std::pow(kPi, 3),
                             16 * std::pow(kPi, 3) / 15,
                             std::pow(kPi, 4) / 3,
                             32 * std::pow(kPi, 4) / 105,
                             std::pow(kPi, 5) / 12};
    for (int n = 2; n <= 10; ++n) {
        const DimensionConstants c = dimension_constants(n);
        if (std::fabs(c.sphere_area - n * c.ball_volume) != 0.0)
            ok = false, bad += fmt(" omega!=nOmega@n=%d", n);
        if (std::fabs(c.sphere_area / closed[n - 2] - 1) > 1e-13)
            ok = false, bad += fmt(" area@n=%d", n);
    }
    const double norm_half = spherical_norm(RadialField::constant(1, 2), 0.5);
    if (std::fabs(norm_half - kPi) > 1e-12)
        ok = false, bad += " norm(1,0.5)";
    const Verdict v_const = norm_divergence(RadialField::constant(1, 2), 0.5).verdict;
    const Verdict v_power = norm_divergence(RadialField::radial_power(1, 1, 2), 0.5).verdict;
    if (v_const != Verdict::Divergent)
        ok = false, bad += " div(Q=1)";
    if (v_power != Verdict::Convergent)
        ok = false, bad += " conv(Q=1/|x|)";
    const double ring2 = ring_modulus(1.0, std::numbers::e, 2);
    const double ring3 = ring_modulus(1.0, std::numbers::e, 3);
    if (std::fabs(ring2 - 2 * kPi) > 1e-12 || std::fabs(ring3 - 4 * kPi) > 1e-12)
        ok = false, bad += " ring";
    res.pass = ok;
    res.detail = fmt("constants n=2..10, norm(Q=1,r=0.5)=%.17g, verdicts %s/%s, ring=%.17g",
                     norm_half, to_string(v_const), to_string(v_power), ring2);
    if (!bad.empty())
        res.detail += " FAIL:" + bad;
    return res;
}

// ---- criterion 11: determinism ----------------------------------------------

std::string determinism_payload(std::uint64_t seed) {
    ordered_json j;
    const SweepResult sweep = lemma31_sweep(seed, 20);
    j["sweep"] = {{"passes", sweep.passes},
                  {"vacuous", sweep.vacuous},
                  {"worst_margin", fmt("%.17g", sweep.worst_margin)},
                  {"worst_case", sweep.worst_case}};
    const ExtremalMap map = ExtremalMap::build(MonotoneMap::power(1, 2), 2, 512, 1e-6);
    j["extremal"] = {{"gamma", fmt("%.17g", map.gamma())},
                     {"R", fmt("%.17g", map.outer_radius())},
                     {"I1", fmt("%.17g", map.profile().accumulated.back())}};
    ordered_json verdicts = ordered_json::array();
    for (const auto& [fname, phi] : oracle_table())
        for (const auto& [kname, kind] : oracle_kinds())
            verdicts.push_back(to_string(classify(phi, kind).verdict));
    j["verdicts"] = verdicts;
    std::mt19937_64 rng(seed);
    ordered_json tables = ordered_json::array();
    for (int i = 0; i < 5; ++i)
        tables.push_back(random_convex_pwl(rng).describe());
    j["tables"] = tables;
    return j.dump();
}

bool run_capture(const std::string& cmd, std::string& out) {
    static int counter = 0;
    const std::string path = "/tmp/qlab_capture_" + std::to_string(++counter) + "_" +
                             std::to_string(reinterpret_cast<std::uintptr_t>(&counter) % 100000) +
                             ".json";
    const int rc = std::system((cmd + " > " + path + " 2>/dev/null").c_str());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    std::remove(path.c_str());
    return rc == 0 && !out.empty();
}

CriterionResult deterministic_output(const SuiteOptions& opt) {
    CriterionResult res;
    res.id = "deterministic-output";
    if (!opt.qlab_binary.empty()) {
        const std::string cmd =
            opt.qlab_binary + " suite --seed " + std::to_string(opt.seed) + " --json";
        std::string a, b;
        const bool ok_a = run_capture(cmd, a);
        const bool ok_b = run_capture(cmd, b);
        res.pass = ok_a && ok_b && a == b;
        res.detail = fmt("two CLI suite runs, %zu bytes, byte-identical: %s", a.size(),
                         res.pass ? "yes" : "no");
        return res;
    }
    const std::string a = determinism_payload(opt.seed);
    const std::string b = determinism_payload(opt.seed);
    res.pass = a == b;
    res.detail = fmt("recomputed payload, %zu bytes, byte-identical: %s", a.size(),
                     res.pass ? "yes" : "no");
    return res;
}

} // namespace

MonotoneMap random_convex_pwl(std::mt19937_64& rng) {
    auto uniform = [&](double a, double b) {
        return a + (b - a) * std::generate_canonical<double, 53>(rng);
    };
    const int segments = 2 + static_cast<int>(rng() % 5);
    PwlSpec spec;
    double t = 0;
    double v = uniform(0.0, 2.0);
    double slope = uniform(0.0, 1.5);
    spec.t.push_back(t);
    spec.v.push_back(v);
    for (int s = 0; s < segments; ++s) {
        const double dt = std::exp(uniform(std::log(0.2), std::log(5.0)));
        t += dt;
        v += slope * dt;
        spec.t.push_back(t);
        spec.v.push_back(v);
        slope += std::exp(uniform(std::log(0.05), std::log(2.0)));
    }
    if (uniform(0.0, 1.0) < 0.35)
        spec.blowup = t * uniform(1.2, 3.0);
    return MonotoneMap::pwl(std::move(spec));
}

SuiteResult run_acceptance_suite(const SuiteOptions& opt) {
    SuiteResult res;
    res.seed = opt.seed;
    res.items.push_back(extremal_closed_form_n2());
    res.items.push_back(extremal_closed_form_n3());
    res.items.push_back(finite_difference_dilatation());
    res.items.push_back(boundary_signature());
    res.items.push_back(mean_inequality_suite(opt.seed));
    res.items.push_back(classifier_oracle_table());
    res.items.push_back(equivalence_random_tables(opt.seed));
    res.items.push_back(divergence_monotone_in_p());
    res.items.push_back(mutual_exclusion());
    res.items.push_back(modulus_utilities());
    res.items.push_back(deterministic_output(opt));
    res.all_pass = true;
    for (const auto& item : res.items)
        res.all_pass = res.all_pass && item.pass;
    return res;
}

std::string suite_json(const SuiteResult& res) {
    ordered_json j;
    j["tool"] = "qlab";
    j["version"] = kVersion;
    j["command"] = "suite";
    j["seed"] = res.seed;
    ordered_json items = ordered_json::array();
    for (const auto& item : res.items)
        items.push_back({{"id", item.id}, {"pass", item.pass}, {"detail", item.detail}});
    j["criteria"] = items;
    j["all_pass"] = res.all_pass;
    return j.dump(2) + "\n";
}

} // namespace qlab
