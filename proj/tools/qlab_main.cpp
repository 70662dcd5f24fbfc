#include "qlab/classifier.hpp"
#include "qlab/extremal.hpp"
#include "qlab/mean_inequality.hpp"
#include "qlab/modulus.hpp"
#include "qlab/specio.hpp"
#include "qlab/suite.hpp"
#include "qlab/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using nlohmann::ordered_json;
using namespace qlab;

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ordered_json output_shell(const std::string& command, ordered_json config) {
    ordered_json j;
    j["tool"] = "qlab";
    j["version"] = kVersion;
    j["command"] = command;
    j["config"] = std::move(config);
    return j;
}

void write_csv(const std::string& path, const std::string& command, const ordered_json& config,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot open output file '" + path + "'");
    out << "# qlab " << kVersion << " " << command << "\n";
    out << "# config: " << config.dump() << "\n";
    for (size_t c = 0; c < columns.size(); ++c)
        out << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c)
            out << num17(row[c]) << (c + 1 < row.size() ? "," : "\n");
    }
}

ordered_json report_json(const ConditionReport& rep) {
    ordered_json j;
    j["condition"] = to_string(rep.kind.tag);
    j["verdict"] = to_string(rep.verdict);
    j["lower"] = rep.lower_used;
    j["space"] = rep.space;
    j["blocks"] = rep.block_sums.size();
    j["tail_estimate"] = rep.tail_estimate;
    if (rep.verdict == Verdict::Convergent)
        j["total"] = rep.total();
    if (!rep.note.empty())
        j["note"] = rep.note;
    return j;
}

int cmd_check_phi(const std::string& phi_spec, int n, std::optional<double> p_opt, int kmax,
                  bool json) {
    const MonotoneMap phi = parse_map_spec(phi_spec);
    const double p = p_opt.value_or(static_cast<double>(n - 1));
    ClassifyOptions opt;
    opt.k_max = kmax;

    const EquivalenceReport eq = classify_all_equivalent(phi, p, opt);
    std::vector<ConditionReport> rows = eq.reports;
    rows.push_back(classify(phi, ConditionKind::t42(n), opt));
    rows.push_back(classify(phi, ConditionKind::l51(), opt));

    ordered_json config{{"phi", ordered_json::parse(map_spec_json(phi))},
                        {"n", n},
                        {"p", p},
                        {"kmax", kmax}};
    if (json) {
        ordered_json j = output_shell("check-phi", config);
        ordered_json items = ordered_json::array();
        for (const auto& rep : rows)
            items.push_back(report_json(rep));
        j["result"] = {{"conditions", items},
                       {"consistent", eq.consistent},
                       {"convexity_warning", eq.convexity_warning}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::printf("phi = %s   p = %g   n = %d\n", phi.describe().c_str(), p, n);
    if (eq.convexity_warning)
        std::printf("warning: phi failed the convexity check; the conditions need not agree\n");
    std::printf("%-10s %-13s %-12s %-12s %s\n", "condition", "verdict", "lower", "space", "note");
    for (const auto& rep : rows)
        std::printf("%-10s %-13s %-12g %-12s %s\n", to_string(rep.kind.tag),
                    to_string(rep.verdict), rep.lower_used, rep.space.c_str(), rep.note.c_str());
    std::printf("consistent: %s\n", eq.consistent ? "yes" : "no");
    return 0;
}

int cmd_verify_lemma31(const std::string& k_spec, const std::string& phi_spec, double p, int n,
                       int sweep, std::uint64_t seed, bool json) {
    ordered_json config{{"phi", phi_spec}, {"K", k_spec}, {"p", p}, {"n", n}};
    if (sweep > 0) {
        config["sweep"] = sweep;
        config["seed"] = seed;
        const SweepResult res = lemma31_sweep(seed, sweep);
        if (json) {
            ordered_json j = output_shell("verify-lemma31", config);
            j["result"] = {{"trials", res.trials},
                           {"passes", res.passes},
                           {"vacuous", res.vacuous},
                           {"jensen_checks", res.jensen_checks},
                           {"jensen_failures", res.jensen_failures},
                           {"worst_margin", res.worst_margin},
                           {"worst_case", res.worst_case},
                           {"all_pass", res.all_pass}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::printf("sweep: %d/%d passes, %d vacuous, jensen %d/%d, worst margin %.6g\n",
                        res.passes, res.trials, res.vacuous,
                        res.jensen_checks - res.jensen_failures, res.jensen_checks,
                        res.worst_margin);
        }
        return res.all_pass ? 0 : 1;
    }

    const MonotoneMap phi = parse_map_spec(phi_spec);
    const RadialField K = parse_field_spec(k_spec, n);
    const VerificationRecord rec = verify_lemma31(K, phi, p);
    if (json) {
        ordered_json j = output_shell("verify-lemma31", config);
        j["result"] = {{"lhs", rec.lhs},       {"rhs", rec.rhs},
                       {"mean", rec.mean},     {"pass", rec.pass},
                       {"vacuous", rec.vacuous}, {"lhs_error", rec.lhs_error},
                       {"rhs_error", rec.rhs_error}, {"note", rec.note}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("K = %s, phi = %s, p = %g, n = %d\n", K.describe().c_str(),
                    phi.describe().c_str(), p, n);
        std::printf("lhs  = %s\nrhs  = %s\nmean = %s\n", num17(rec.lhs).c_str(),
                    num17(rec.rhs).c_str(), num17(rec.mean).c_str());
        std::printf("%s%s\n", rec.pass ? "PASS" : "FAIL",
                    rec.note.empty() ? "" : (" (" + rec.note + ")").c_str());
    }
    return rec.pass ? 0 : 1;
}

int cmd_build_extremal(const std::string& phi_spec, int n, int grid, double rmin,
                       const std::string& out_path, bool json) {
    const MonotoneMap phi = parse_map_spec(phi_spec);
    const ExtremalMap map = ExtremalMap::build(phi, n, grid, rmin);
    const DistortionProfile& prof = map.profile();
    const ExtremalMap::Energy energy = map.energy();

    ordered_json config{{"phi", ordered_json::parse(map_spec_json(phi))},
                        {"n", n},
                        {"grid", grid},
                        {"rmin", rmin}};
    if (!out_path.empty()) {
        std::vector<std::vector<double>> rows;
        rows.reserve(prof.radii.size());
        for (size_t i = 0; i < prof.radii.size(); ++i) {
            const double r = prof.radii[i];
            const double K = prof.distortion[i];
            const double I = prof.accumulated[i];
            rows.push_back({r, K, I, std::exp(I), prof.phi(K)});
        }
        write_csv(out_path, "build-extremal", config, {"r", "K", "I", "rho", "phi_of_K"}, rows);
    }

    ordered_json j = output_shell("build-extremal", config);
    j["result"] = {{"gamma", prof.gamma},
                   {"R", map.outer_radius()},
                   {"I1", prof.accumulated.back()},
                   {"energy", energy.value},
                   {"bound", energy.bound},
                   {"max_residual", prof.max_residual}};
    if (!out_path.empty())
        j["csv"] = out_path;
    if (json)
        std::cout << j.dump(2) << "\n";
    else
        std::printf("gamma = %s\nR = %s\nenergy = %s\nbound = %s\nmax residual = %.3g\n%s",
                    num17(prof.gamma).c_str(), num17(map.outer_radius()).c_str(),
                    num17(energy.value).c_str(), num17(energy.bound).c_str(), prof.max_residual,
                    out_path.empty() ? "" : ("profile written to " + out_path + "\n").c_str());

    const bool bound_ok = energy.value <= energy.bound * (1 + 1e-6);
    const bool ring_ok = map.outer_radius() > 1.0;
    if (!bound_ok || !ring_ok) {
        std::fprintf(stderr, "verification failed: %s\n",
                     bound_ok ? "image ring degenerate" : "energy exceeds its bound");
        return 1;
    }
    return 0;
}

int cmd_norm_profile(const std::string& q_spec, int n, double delta, int count,
                     const std::string& out_path, bool json) {
    const RadialField Q = parse_field_spec(q_spec, n);
    const NormProfile prof = norm_profile(Q, delta, count);
    ordered_json config{{"Q", q_spec}, {"n", n}, {"delta", delta}, {"count", count}};
    if (!out_path.empty()) {
        std::vector<std::vector<double>> rows;
        for (size_t i = 0; i < prof.radii.size(); ++i)
            rows.push_back({prof.radii[i], prof.norms[i]});
        write_csv(out_path, "norm-profile", config, {"r", "norm"}, rows);
    }
    if (json) {
        ordered_json j = output_shell("norm-profile", config);
        ordered_json rows = ordered_json::array();
        for (size_t i = 0; i < prof.radii.size(); ++i)
            rows.push_back({{"r", prof.radii[i]}, {"norm", prof.norms[i]}});
        j["result"] = {{"rows", rows},
                       {"verdict", to_string(prof.divergence.verdict)},
                       {"note", prof.divergence.note}};
        std::cout << j.dump(2) << "\n";
    } else {
        if (out_path.empty()) {
            std::printf("r,norm\n");
            for (size_t i = 0; i < prof.radii.size(); ++i)
                std::printf("%s,%s\n", num17(prof.radii[i]).c_str(), num17(prof.norms[i]).c_str());
        } else {
            std::printf("profile written to %s\n", out_path.c_str());
        }
        std::printf("divergence toward 0: %s\n", to_string(prof.divergence.verdict));
    }
    return 0;
}

int cmd_suite(std::uint64_t seed, bool json) {
    SuiteOptions opt;
    opt.seed = seed;
    const SuiteResult res = run_acceptance_suite(opt);
    if (json) {
        std::cout << suite_json(res);
    } else {
        for (const auto& item : res.items)
            std::printf("%s %s — %s\n", item.pass ? "PASS" : "FAIL", item.id.c_str(),
                        item.detail.c_str());
        std::printf("%s (%zu criteria, seed %llu)\n", res.all_pass ? "ALL PASS" : "FAILURES",
                    res.items.size(), static_cast<unsigned long long>(res.seed));
    }
    return res.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qlab — numerical laboratory for monotone-map calculus, integral divergence "
                 "classification and extremal radial maps"};
    app.require_subcommand(1);

    std::uint64_t default_seed = 20260809;
    if (const char* env = std::getenv("QLAB_SEED"))
        default_seed = std::strtoull(env, nullptr, 10);

    // check-phi
    auto* check = app.add_subcommand("check-phi", "classify the integral conditions for a map");
    std::string check_phi;
    int check_n = 2, check_kmax = 40;
    double check_p = -1;
    bool check_json = false;
    check->add_option("--phi", check_phi, "map spec (inline, JSON or file)")->required();
    check->add_option("--n", check_n, "dimension (T42 row, default p = n-1)")
        ->check(CLI::Range(2, 64));
    check->add_option("--p", check_p, "exponent for C24..C29 (default n-1)")
        ->check(CLI::PositiveNumber);
    check->add_option("--kmax", check_kmax, "dyadic block count")->check(CLI::Range(5, 200));
    check->add_flag("--json", check_json, "machine output");

    // verify-lemma31
    auto* verify = app.add_subcommand("verify-lemma31", "verify the spherical mean inequality");
    std::string verify_k = "const:1", verify_phi = "power:1,1";
    double verify_p = 1;
    int verify_n = 2, verify_sweep = 0;
    std::uint64_t verify_seed = default_seed;
    bool verify_json = false;
    verify->add_option("--K", verify_k, "field spec");
    verify->add_option("--phi", verify_phi, "map spec");
    verify->add_option("--p", verify_p, "exponent")->check(CLI::PositiveNumber);
    verify->add_option("--n", verify_n, "dimension")->check(CLI::Range(2, 64));
    verify->add_option("--sweep", verify_sweep, "run a randomized suite of this many trials")
        ->expected(0, 1)
        ->default_str("100");
    verify->add_option("--seed", verify_seed, "sweep seed");
    verify->add_flag("--json", verify_json, "machine output");

    // build-extremal
    auto* build = app.add_subcommand("build-extremal", "solve the radial counterexample profile");
    std::string build_phi, build_out;
    int build_n = 2, build_grid = 4096;
    double build_rmin = 1e-6;
    bool build_json = false;
    build->add_option("--phi", build_phi, "map spec")->required();
    build->add_option("--n", build_n, "dimension")->check(CLI::Range(2, 64));
    build->add_option("--grid", build_grid, "profile grid size")->check(CLI::Range(16, 1 << 22));
    build->add_option("--rmin", build_rmin, "smallest grid radius")
        ->check(CLI::Range(1e-12, 0.5));
    build->add_option("--out", build_out, "CSV output path");
    build->add_flag("--json", build_json, "machine output");

    // norm-profile
    auto* norm = app.add_subcommand("norm-profile", "spherical norm profile and divergence");
    std::string norm_q, norm_out;
    int norm_n = 2, norm_count = 64;
    double norm_delta = 0.5;
    bool norm_json = false;
    norm->add_option("--Q", norm_q, "field spec")->required();
    norm->add_option("--n", norm_n, "dimension")->check(CLI::Range(2, 64));
    norm->add_option("--delta", norm_delta, "upper radius")
        ->required()
        ->check(CLI::Range(1e-12, 1.0));
    norm->add_option("--count", norm_count, "rows in the profile")->check(CLI::Range(2, 100000));
    norm->add_option("--out", norm_out, "CSV output path");
    norm->add_flag("--json", norm_json, "machine output");

    // ring-modulus
    auto* ring = app.add_subcommand("ring-modulus", "modulus of the spherical ring family");
    double ring_r = 1, ring_R = 2;
    int ring_n = 2;
    bool ring_json = false;
    ring->add_option("--r", ring_r, "inner radius")->required();
    ring->add_option("--R", ring_R, "outer radius")->required();
    ring->add_option("--n", ring_n, "dimension");
    ring->add_flag("--json", ring_json, "machine output");

    // suite
    auto* suite = app.add_subcommand("suite", "run the full verification battery");
    std::uint64_t suite_seed = default_seed;
    bool suite_json_flag = false;
    suite->add_option("--seed", suite_seed, "randomized-suite seed");
    suite->add_flag("--json", suite_json_flag, "machine output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (check->parsed())
            return cmd_check_phi(check_phi, check_n,
                                 check_p > 0 ? std::optional<double>(check_p) : std::nullopt,
                                 check_kmax, check_json);
        if (verify->parsed()) {
            int sweep = 0;
            if (verify->count("--sweep"))
                sweep = verify_sweep > 0 ? verify_sweep : 100;
            return cmd_verify_lemma31(verify_k, verify_phi, verify_p, verify_n, sweep, verify_seed,
                                      verify_json);
        }
        if (build->parsed())
            return cmd_build_extremal(build_phi, build_n, build_grid, build_rmin, build_out,
                                      build_json);
        if (norm->parsed())
            return cmd_norm_profile(norm_q, norm_n, norm_delta, norm_count, norm_out, norm_json);
        if (ring->parsed()) {
            const double value = qlab::ring_modulus(ring_r, ring_R, ring_n);
            if (ring_json) {
                ordered_json j = output_shell("ring-modulus",
                                              {{"r", ring_r}, {"R", ring_R}, {"n", ring_n}});
                j["result"] = value;
                std::cout << j.dump(2) << "\n";
            } else {
                std::printf("%s\n", num17(value).c_str());
            }
            return 0;
        }
        if (suite->parsed())
            return cmd_suite(suite_seed, suite_json_flag);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
