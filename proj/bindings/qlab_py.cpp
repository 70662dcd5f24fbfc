#include "qlab/classifier.hpp"
#include "qlab/extremal.hpp"
#include "qlab/mean_inequality.hpp"
#include "qlab/modulus.hpp"
#include "qlab/specio.hpp"
#include "qlab/suite.hpp"
#include "qlab/version.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qlab;

namespace {

ConditionKind make_kind(const std::string& tag, double p, int n, std::optional<double> lower) {
    if (tag == "C24") return ConditionKind::c24(p, lower);
    if (tag == "C25") return ConditionKind::c25(p, lower);
    if (tag == "C26") return ConditionKind::c26(p, lower);
    if (tag == "C27") return ConditionKind::c27(p, lower);
    if (tag == "C28") return ConditionKind::c28(p, lower);
    if (tag == "C29") return ConditionKind::c29(p, lower);
    if (tag == "T42") return ConditionKind::t42(n, lower);
    if (tag == "L51") return ConditionKind::l51(lower);
    throw std::invalid_argument("unknown condition tag '" + tag + "'");
}

} // namespace

PYBIND11_MODULE(_qlab, m) {
    m.doc() = "numerical laboratory for monotone-map calculus, integral divergence "
              "classification, the spherical mean inequality and extremal radial maps";
    m.attr("__version__") = kVersion;

    py::enum_<Verdict>(m, "Verdict")
        .value("Divergent", Verdict::Divergent)
        .value("Convergent", Verdict::Convergent)
        .value("Inconclusive", Verdict::Inconclusive);

    py::class_<MonotoneMap>(m, "MonotoneMap")
        .def_static("power", &MonotoneMap::power, py::arg("c"), py::arg("alpha"))
        .def_static("exp_power", &MonotoneMap::exp_power, py::arg("alpha"), py::arg("beta"),
                    py::arg("tau0") = 0.0)
        .def_static("affine", &MonotoneMap::affine, py::arg("a"), py::arg("b"))
        .def_static(
            "pwl",
            [](std::vector<double> t, std::vector<double> v, bool step,
               std::optional<double> blowup) {
                PwlSpec spec;
                spec.t = std::move(t);
                spec.v = std::move(v);
                spec.step = step;
                if (blowup)
                    spec.blowup = *blowup;
                return MonotoneMap::pwl(std::move(spec));
            },
            py::arg("t"), py::arg("v"), py::arg("step") = false,
            py::arg("blowup") = std::nullopt)
        .def_static("identity", &MonotoneMap::identity)
        .def_static("from_spec", &parse_map_spec, py::arg("spec"),
                    "parse an inline shorthand, JSON text or JSON file path")
        .def("__call__", &MonotoneMap::operator(), py::arg("t"))
        .def("inverse", &MonotoneMap::inverse, py::arg("tau"),
             "generalized inverse: inf{t : value(t) >= tau}")
        .def("inverse_at_exp", &MonotoneMap::inverse_at_exp, py::arg("eta"))
        .def("log_value", &MonotoneMap::log_value, py::arg("t"))
        .def("power_compose", &MonotoneMap::power_compose, py::arg("p"))
        .def("identity_floored", &MonotoneMap::identity_floored)
        .def_property_readonly("tau0", &MonotoneMap::tau0)
        .def_property_readonly("zero_plateau_end", &MonotoneMap::zero_plateau_end)
        .def_property_readonly("value_at_inf", &MonotoneMap::value_at_inf)
        .def("spec_json", &map_spec_json)
        .def("__repr__", [](const MonotoneMap& self) { return "MonotoneMap(" + self.describe() + ")"; });

    py::class_<LogMap>(m, "LogMap")
        .def("__call__", &LogMap::operator(), py::arg("t"))
        .def("inverse", &LogMap::inverse, py::arg("eta"));

    m.def("log_transform", &log_transform, py::arg("phi"), py::arg("p"),
          "H(t) = log phi(t^p) with inverse H^{-1}(eta) = phi_p^{-1}(e^eta)");

    py::class_<ConvexityReport>(m, "ConvexityReport")
        .def_readonly("midpoint_ok", &ConvexityReport::midpoint_ok)
        .def_readonly("worst_gap", &ConvexityReport::worst_gap)
        .def_readonly("worst_t1", &ConvexityReport::worst_t1)
        .def_readonly("worst_t2", &ConvexityReport::worst_t2)
        .def_readonly("inclination_ok", &ConvexityReport::inclination_ok)
        .def("ok", &ConvexityReport::ok);

    m.def(
        "check_convex",
        [](const MonotoneMap& phi, std::optional<std::vector<double>> grid, double tol) {
            const std::vector<double> g = grid ? *grid : default_convexity_grid();
            return check_convex(phi, g, tol);
        },
        py::arg("phi"), py::arg("grid") = std::nullopt, py::arg("tol") = 1e-9);

    py::class_<ConditionReport>(m, "ConditionReport")
        .def_property_readonly("tag",
                               [](const ConditionReport& r) { return std::string(to_string(r.kind.tag)); })
        .def_readonly("verdict", &ConditionReport::verdict)
        .def_readonly("block_sums", &ConditionReport::block_sums)
        .def_readonly("head", &ConditionReport::head)
        .def_readonly("tail_estimate", &ConditionReport::tail_estimate)
        .def_readonly("lower_used", &ConditionReport::lower_used)
        .def_readonly("space", &ConditionReport::space)
        .def_readonly("note", &ConditionReport::note)
        .def("total", &ConditionReport::total);

    m.def(
        "classify",
        [](const MonotoneMap& phi, const std::string& tag, double p, int n,
           std::optional<double> lower, int k_max) {
            ClassifyOptions opt;
            opt.k_max = k_max;
            return classify(phi, make_kind(tag, p, n, lower), opt);
        },
        py::arg("phi"), py::arg("tag"), py::arg("p") = 1.0, py::arg("n") = 2,
        py::arg("lower") = std::nullopt, py::arg("k_max") = 40,
        "classify one of the integral conditions C24..C29, T42, L51");

    m.def(
        "classify_all_equivalent",
        [](const MonotoneMap& phi, double p) {
            const EquivalenceReport rep = classify_all_equivalent(phi, p);
            py::dict out;
            py::list reports;
            for (const auto& r : rep.reports)
                reports.append(r);
            out["reports"] = reports;
            out["consistent"] = rep.consistent;
            out["convexity_warning"] = rep.convexity_warning;
            return out;
        },
        py::arg("phi"), py::arg("p"));

    m.def(
        "analytic_oracle",
        [](const MonotoneMap& phi, const std::string& tag, double p, int n) {
            return analytic_oracle(phi, make_kind(tag, p, n, std::nullopt));
        },
        py::arg("phi"), py::arg("tag"), py::arg("p") = 1.0, py::arg("n") = 2);

    py::class_<RadialField>(m, "RadialField")
        .def_static("constant", &RadialField::constant, py::arg("c"), py::arg("dim"))
        .def_static("radial_power", &RadialField::radial_power, py::arg("c"), py::arg("a"),
                    py::arg("dim"))
        .def_static("radial_log_power", &RadialField::radial_log_power, py::arg("c"),
                    py::arg("b"), py::arg("dim"))
        .def_static("sampled2", &RadialField::sampled2, py::arg("radii"), py::arg("values"))
        .def_static("sampled3", &RadialField::sampled3, py::arg("radii"), py::arg("values"),
                    py::arg("n_lat"), py::arg("n_lon"))
        .def_static("from_spec", &parse_field_spec, py::arg("spec"), py::arg("dim") = 2)
        .def_property_readonly("dim", &RadialField::dim)
        .def_property_readonly("is_radial", &RadialField::is_radial)
        .def("radial_value", &RadialField::radial_value, py::arg("r"))
        .def("sphere_mean", py::overload_cast<double>(&RadialField::sphere_mean, py::const_),
             py::arg("r"))
        .def("spec_json", &field_spec_json)
        .def("__repr__",
             [](const RadialField& self) { return "RadialField(" + self.describe() + ")"; });

    m.def(
        "spherical_average",
        [](const RadialField& K, double r) { return K.sphere_mean(r); }, py::arg("K"),
        py::arg("r"));
    m.def("ball_mean", &ball_mean, py::arg("K"), py::arg("phi"));
    m.def("jensen_gap", &jensen_gap, py::arg("K"), py::arg("phi"), py::arg("r"));

    py::class_<VerificationRecord>(m, "VerificationRecord")
        .def_readonly("lhs", &VerificationRecord::lhs)
        .def_readonly("rhs", &VerificationRecord::rhs)
        .def_readonly("mean", &VerificationRecord::mean)
        .def_readonly("p", &VerificationRecord::p)
        .def_readonly("n", &VerificationRecord::n)
        .def_readonly("passed", &VerificationRecord::pass)
        .def_readonly("vacuous", &VerificationRecord::vacuous)
        .def_readonly("lhs_error", &VerificationRecord::lhs_error)
        .def_readonly("rhs_error", &VerificationRecord::rhs_error)
        .def_readonly("mean_error", &VerificationRecord::mean_error)
        .def_readonly("lhs_tail_integrand", &VerificationRecord::lhs_tail_integrand)
        .def_readonly("note", &VerificationRecord::note);

    m.def("verify_lemma31", &verify_lemma31, py::arg("K"), py::arg("phi"), py::arg("p"),
          py::arg("tol_cmp") = 1e-6);

    m.def(
        "lemma31_sweep",
        [](std::uint64_t seed, int trials) {
            const SweepResult res = lemma31_sweep(seed, trials);
            py::dict out;
            out["trials"] = res.trials;
            out["passes"] = res.passes;
            out["vacuous"] = res.vacuous;
            out["jensen_checks"] = res.jensen_checks;
            out["jensen_failures"] = res.jensen_failures;
            out["worst_margin"] = res.worst_margin;
            out["worst_case"] = res.worst_case;
            out["all_pass"] = res.all_pass;
            return out;
        },
        py::arg("seed"), py::arg("trials"));

    m.def(
        "dimension_constants",
        [](int n) {
            const DimensionConstants c = dimension_constants(n);
            return py::make_tuple(c.sphere_area, c.ball_volume);
        },
        py::arg("n"), "returns (sphere area omega_{n-1}, ball volume Omega_n)");
    m.def("ring_modulus", &ring_modulus, py::arg("r"), py::arg("R"), py::arg("n"));
    m.def(
        "spherical_norm",
        [](const RadialField& Q, double r, bool boundary_cap) {
            return spherical_norm(Q, r, boundary_cap ? NormCenter::Boundary2 : NormCenter::Origin);
        },
        py::arg("Q"), py::arg("r"), py::arg("boundary_cap") = false);
    m.def(
        "norm_divergence",
        [](const RadialField& Q, double delta) {
            const NormDivergenceReport rep = norm_divergence(Q, delta);
            py::dict out;
            out["verdict"] = rep.verdict;
            out["block_sums"] = rep.block_sums;
            out["tail_estimate"] = rep.tail_estimate;
            out["note"] = rep.note;
            return out;
        },
        py::arg("Q"), py::arg("delta"));

    py::class_<GrowthWitness>(m, "GrowthWitness")
        .def_readonly("C", &GrowthWitness::C)
        .def_readonly("T", &GrowthWitness::T);

    py::class_<NormalizeResult>(m, "NormalizeResult")
        .def_property_readonly("map",
                               [](const NormalizeResult& r) {
                                   return r.map ? py::cast(*r.map) : py::none().cast<py::object>();
                               })
        .def_readonly("witness", &NormalizeResult::witness)
        .def_readonly("reason", &NormalizeResult::reason)
        .def("accepted", &NormalizeResult::accepted);

    m.def("normalize_phi", &normalize_phi, py::arg("phi"));

    py::class_<DistortionProfile>(m, "DistortionProfile")
        .def_readonly("gamma", &DistortionProfile::gamma)
        .def_readonly("radii", &DistortionProfile::radii)
        .def_readonly("distortion", &DistortionProfile::distortion)
        .def_readonly("accumulated", &DistortionProfile::accumulated)
        .def_readonly("max_residual", &DistortionProfile::max_residual)
        .def_readonly("below_grid", &DistortionProfile::below_grid)
        .def_readonly("below_grid_bound", &DistortionProfile::below_grid_bound)
        .def("distortion_at", &DistortionProfile::distortion_at, py::arg("r"))
        .def("integral_at", &DistortionProfile::integral_at, py::arg("t"))
        .def("scale_at", &DistortionProfile::scale_at, py::arg("t"));

    m.def("solve_profile", &solve_profile, py::arg("normalized_phi"), py::arg("grid_size") = 4096,
          py::arg("r_min") = 1e-6);

    py::class_<Distortions>(m, "Distortions")
        .def_readonly("tangential", &Distortions::tangential)
        .def_readonly("radial", &Distortions::radial)
        .def_readonly("outer", &Distortions::outer);

    py::class_<ExtremalMap>(m, "ExtremalMap")
        .def_static("build", &ExtremalMap::build, py::arg("phi"), py::arg("n"),
                    py::arg("grid_size") = 4096, py::arg("r_min") = 1e-6)
        .def_property_readonly("dim", &ExtremalMap::dim)
        .def_property_readonly("gamma", &ExtremalMap::gamma)
        .def_property_readonly("outer_radius", &ExtremalMap::outer_radius)
        .def_property_readonly("profile", &ExtremalMap::profile)
        .def("__call__",
             [](const ExtremalMap& self, const std::vector<double>& x) { return self(x); })
        .def("distortions", &ExtremalMap::distortions, py::arg("r"))
        .def("energy",
             [](const ExtremalMap& self) {
                 const ExtremalMap::Energy e = self.energy();
                 return py::make_tuple(e.value, e.bound);
             })
        .def("boundary_report", [](const ExtremalMap& self, const std::vector<double>& probes) {
            const ExtremalMap::BoundaryReport rep = self.boundary_report(probes);
            py::dict out;
            py::list rows;
            for (const auto& pr : rep.probes) {
                py::dict row;
                row["t"] = pr.t;
                row["scale"] = pr.scale;
                row["oscillation"] = pr.oscillation;
                rows.append(row);
            }
            out["probes"] = rows;
            out["outer_radius"] = rep.outer_radius;
            out["scale_monotone"] = rep.scale_monotone;
            out["oscillation_above_2"] = rep.oscillation_above_2;
            return out;
        });

    m.def(
        "run_acceptance_suite",
        [](std::uint64_t seed) {
            SuiteOptions opt;
            opt.seed = seed;
            const SuiteResult res = run_acceptance_suite(opt);
            py::list items;
            for (const auto& item : res.items) {
                py::dict d;
                d["id"] = item.id;
                d["pass"] = item.pass;
                d["detail"] = item.detail;
                items.append(d);
            }
            py::dict out;
            out["seed"] = res.seed;
            out["criteria"] = items;
            out["all_pass"] = res.all_pass;
            return out;
        },
        py::arg("seed") = 20260809);
}
