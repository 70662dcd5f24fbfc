#include "qlab/specio.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qlab {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument(where + ": " + what);
}

ordered_json load_json(const std::string& text, const std::string& where) {
    std::string body = text;
    if (!text.empty() && text[0] != '{' && text[0] != '[') {
        std::ifstream in(text);
        if (!in)
            fail(where, "cannot open spec file '" + text + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        body = ss.str();
    }
    try {
        return ordered_json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        fail(where, std::string("invalid JSON: ") + e.what());
    }
}

double get_num(const ordered_json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key))
        fail(where, "missing field '" + key + "'");
    if (!j[key].is_number())
        fail(where, "field '" + key + "' must be a number");
    return j[key].get<double>();
}

double get_num_or(const ordered_json& j, const std::string& key, double fallback) {
    return j.contains(key) ? j[key].get<double>() : fallback;
}

std::vector<double> split_params(const std::string& text, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail(where, "bad numeric parameter '" + item + "'");
        }
    }
    return out;
}

MonotoneMap map_from_json(const ordered_json& j) {
    const std::string where = "phi spec";
    if (!j.contains("family") || !j["family"].is_string())
        fail(where, "missing field 'family'");
    const std::string family = j["family"].get<std::string>();
    const ordered_json params = j.value("params", ordered_json::object());
    if (family == "power")
        return MonotoneMap::power(get_num(params, "c", where + ".params"),
                                  get_num(params, "alpha", where + ".params"));
    if (family == "exp_power")
        return MonotoneMap::exp_power(get_num(params, "alpha", where + ".params"),
                                      get_num(params, "beta", where + ".params"),
                                      get_num_or(params, "tau0", 0.0));
    if (family == "affine")
        return MonotoneMap::affine(get_num(params, "a", where + ".params"),
                                   get_num(params, "b", where + ".params"));
    if (family == "pwl") {
        PwlSpec spec;
        if (!params.contains("t") || !params.contains("v"))
            fail(where + ".params", "pwl needs arrays 't' and 'v'");
        spec.t = params["t"].get<std::vector<double>>();
        spec.v = params["v"].get<std::vector<double>>();
        spec.step = params.value("mode", std::string("linear")) == "step";
        if (params.contains("blowup"))
            spec.blowup = params["blowup"].get<double>();
        return MonotoneMap::pwl(std::move(spec));
    }
    fail(where, "unknown family '" + family + "' (power, exp_power, affine, pwl)");
}

} // namespace

MonotoneMap parse_map_spec(const std::string& text) {
    const std::string where = "phi spec";
    const size_t colon = text.find(':');
    if (colon != std::string::npos && text.find('{') == std::string::npos &&
        text.find('/') == std::string::npos) {
        const std::string family = text.substr(0, colon);
        const std::vector<double> p = split_params(text.substr(colon + 1), where);
        if (family == "power" && p.size() == 2)
            return MonotoneMap::power(p[0], p[1]);
        if (family == "exp_power" && (p.size() == 2 || p.size() == 3))
            return MonotoneMap::exp_power(p[0], p[1], p.size() == 3 ? p[2] : 0.0);
        if (family == "affine" && p.size() == 2)
            return MonotoneMap::affine(p[0], p[1]);
        fail(where, "bad inline spec '" + text +
                        "' (power:c,alpha | exp_power:alpha,beta[,tau0] | affine:a,b)");
    }
    return map_from_json(load_json(text, where));
}

std::string map_spec_json(const MonotoneMap& map) {
    ordered_json j;
    ordered_json params;
    switch (map.family()) {
    case MapFamily::Power:
        j["family"] = "power";
        params["c"] = map.as_power()->c;
        params["alpha"] = map.as_power()->alpha;
        break;
    case MapFamily::ExpPower:
        j["family"] = "exp_power";
        params["alpha"] = map.as_exp_power()->alpha;
        params["beta"] = map.as_exp_power()->beta;
        params["tau0"] = map.as_exp_power()->tau0;
        break;
    case MapFamily::Affine:
        j["family"] = "affine";
        params["a"] = map.as_affine()->a;
        params["b"] = map.as_affine()->b;
        break;
    default: {
        const PwlSpec& s = *map.as_pwl();
        j["family"] = "pwl";
        params["t"] = s.t;
        params["v"] = s.v;
        params["mode"] = s.step ? "step" : "linear";
        if (std::isfinite(s.blowup))
            params["blowup"] = s.blowup;
        break;
    }
    }
    j["params"] = params;
    if (map.inner_power() != 1)
        j["inner_power"] = map.inner_power();
    if (map.is_identity_floored())
        j["identity_floor"] = true;
    return j.dump();
}

RadialField parse_field_spec(const std::string& text, int dim) {
    const std::string where = "field spec";
    const size_t colon = text.find(':');
    if (colon != std::string::npos && text.find('{') == std::string::npos &&
        text.find('/') == std::string::npos) {
        const std::string kind = text.substr(0, colon);
        const std::vector<double> p = split_params(text.substr(colon + 1), where);
        if (kind == "const" && p.size() == 1)
            return RadialField::constant(p[0], dim);
        if (kind == "rpow" && p.size() == 2)
            return RadialField::radial_power(p[0], p[1], dim);
        if (kind == "logpow" && p.size() == 2)
            return RadialField::radial_log_power(p[0], p[1], dim);
        fail(where, "bad inline spec '" + text + "' (const:c | rpow:c,a | logpow:c,b)");
    }
    const ordered_json j = load_json(text, where);
    if (!j.contains("kind") || !j["kind"].is_string())
        fail(where, "missing field 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    int n = dim;
    if (j.contains("n")) {
        n = j["n"].get<int>();
        if (dim > 0 && n != dim)
            fail(where, "field 'n' disagrees with the requested dimension");
    }
    if (kind == "constant")
        return RadialField::constant(get_num(j, "c", where), n);
    if (kind == "power")
        return RadialField::radial_power(get_num(j, "c", where), get_num(j, "a", where), n);
    if (kind == "log_power")
        return RadialField::radial_log_power(get_num(j, "c", where), get_num(j, "b", where), n);
    if (kind == "sampled") {
        if (!j.contains("r") || !j.contains("values"))
            fail(where, "sampled field needs arrays 'r' and 'values'");
        auto radii = j["r"].get<std::vector<double>>();
        auto values = j["values"].get<std::vector<std::vector<double>>>();
        if (n == 2)
            return RadialField::sampled2(std::move(radii), std::move(values));
        if (n == 3) {
            if (!j.contains("n_lat") || !j.contains("n_lon"))
                fail(where, "sampled field with n = 3 needs 'n_lat' and 'n_lon'");
            return RadialField::sampled3(std::move(radii), std::move(values),
                                         j["n_lat"].get<int>(), j["n_lon"].get<int>());
        }
        fail(where, "sampled fields support n = 2 and n = 3 only");
    }
    fail(where, "unknown kind '" + kind + "' (constant, power, log_power, sampled)");
}

std::string field_spec_json(const RadialField& field) {
    ordered_json j;
    if (field.kind() == RadialField::Kind::Constant) {
        j["kind"] = "constant";
        j["c"] = field.param_c();
    } else if (field.kind() == RadialField::Kind::Power) {
        j["kind"] = "power";
        j["c"] = field.param_c();
        j["a"] = field.param_a();
    } else if (field.kind() == RadialField::Kind::LogPower) {
        j["kind"] = "log_power";
        j["c"] = field.param_c();
        j["b"] = field.param_a();
    } else {
        j["kind"] = "sampled";
        j["r"] = field.radii();
        j["values"] = field.values();
        if (field.dim() == 3) {
            j["n_lat"] = field.n_lat();
            j["n_lon"] = field.n_lon();
        }
    }
    j["n"] = field.dim();
    return j.dump();
}

} // namespace qlab
