#include "spinsync/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "spinsync/error.hpp"

namespace spinsync {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) {
        invalid(where + " must be an object");
    }
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) {
            invalid("unknown key '" + key + "' in " + where);
        }
    }
}

double number(const Json& j, const char* key, double fallback) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return fallback;
    }
    if (!j.at(key).is_number()) {
        invalid(std::string("'") + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

std::string text(const Json& j, const char* key, const std::string& fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_string()) {
        invalid(std::string("'") + key + "' must be a string");
    }
    return j.at(key).get<std::string>();
}

Complex complex_value(const Json& j, const char* key, Complex fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    const Json& v = j.at(key);
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    invalid(std::string("'") + key + "' must be a number or [re, im]");
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

bool flag(const Json& j, const char* key, bool fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_boolean()) {
        invalid(std::string("'") + key + "' must be true or false");
    }
    return j.at(key).get<bool>();
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) {
        parts.push_back(part);
    }
    return parts;
}

Json* find_path(Json& j, const std::string& path) {
    Json* node = &j;
    for (const auto& part : split_path(path)) {
        if (node->is_object() && node->contains(part)) {
            node = &(*node)[part];
        } else if (node->is_array() && !part.empty() && part.find_first_not_of("0123456789") == std::string::npos &&
                   std::stoul(part) < node->size()) {
            node = &(*node)[std::stoul(part)];
        } else {
            return nullptr;
        }
    }
    return node;
}

const std::set<std::string> kSignalFamilies = {"semiclassical", "equatorial_angles", "equatorial_optimal",
                                               "blockade", "vdp", "vdp_semiclassical", "vdp_optimal", "tones",
                                               "tightness"};

}  // namespace

RunConfig config_from_json(const Json& j) {
    RunConfig c;
    try {
        reject_unknown(j, {"scenario", "unit_rate", "signal", "eta", "epsilon", "order", "sweep", "output",
                           "optimizer", "bound", "figure"},
                       "config");
        if (j.contains("scenario")) {
            const Json& s = j.at("scenario");
            reject_unknown(s, {"type", "gamma_g", "gamma_d", "gamma_dp", "C", "Gamma_10", "Gamma_0m1", "delta"},
                           "scenario");
            c.scenario.kind = parse_scenario(text(s, "type", "equatorial"));
            c.scenario.gamma_g = number(s, "gamma_g", 1.0);
            c.scenario.gamma_d = number(s, "gamma_d", 1.0);
            c.scenario.gamma_dp = number(s, "gamma_dp", 0.0);
            c.scenario.cooperativity = number(s, "C", 1.0);
            c.scenario.gamma_10 = number(s, "Gamma_10", 1.0);
            c.scenario.gamma_0m1 = number(s, "Gamma_0m1", 1.0);
            c.scenario.detuning = number(s, "delta", 0.0);
        }
        c.unit_rate = number(j, "unit_rate", 1.0);
        if (j.contains("signal")) {
            const Json& s = j.at("signal");
            reject_unknown(s, {"family", "params"}, "signal");
            c.signal.family = text(s, "family", "semiclassical");
            if (s.contains("params")) {
                if (!s.at("params").is_object()) {
                    invalid("signal.params must be an object");
                }
                c.signal.params = s.at("params");
            }
        }
        c.eta = number(j, "eta", kDefaultEta);
        if (j.contains("epsilon") && !j.at("epsilon").is_null()) {
            c.epsilon = number(j, "epsilon", 0.0);
        }
        if (j.contains("order")) {
            if (!j.at("order").is_number_integer()) {
                invalid("'order' must be an integer");
            }
            c.order = j.at("order").get<int>();
        }
        if (j.contains("sweep")) {
            if (!j.at("sweep").is_array()) {
                invalid("sweep must be a list of axes");
            }
            for (const Json& a : j.at("sweep")) {
                reject_unknown(a, {"name", "min", "max", "points", "scale"}, "sweep axis");
                Axis axis;
                axis.name = text(a, "name", "");
                axis.min = number(a, "min", 0.0);
                axis.max = number(a, "max", 1.0);
                if (a.contains("points") && !a.at("points").is_number_integer()) {
                    invalid("axis points must be an integer");
                }
                axis.points = a.value("points", 2);
                const std::string scale = text(a, "scale", "linear");
                if (scale != "linear" && scale != "log") {
                    invalid("axis scale must be linear or log");
                }
                axis.scale = scale == "log" ? AxisScale::Log : AxisScale::Linear;
                c.sweep.push_back(axis);
            }
        }
        if (j.contains("output")) {
            const Json& o = j.at("output");
            reject_unknown(o, {"path", "format"}, "output");
            c.output.path = text(o, "path", "");
            c.output.format = text(o, "format", "csv");
        }
        if (j.contains("optimizer")) {
            const Json& o = j.at("optimizer");
            reject_unknown(o, {"family", "grid", "tau_max"}, "optimizer");
            c.optimizer.family = text(o, "family", "equatorial_angles");
            c.optimizer.grid = static_cast<int>(number(o, "grid", 64));
            c.optimizer.tau_max = number(o, "tau_max", 4.0);
        }
        if (j.contains("bound")) {
            const Json& b = j.at("bound");
            reject_unknown(b, {"a", "delta", "b", "c"}, "bound");
            c.bound.a = number(b, "a", 1.0);
            c.bound.delta = number(b, "delta", 0.0);
            c.bound.b = complex_value(b, "b", 0.0);
            c.bound.c = complex_value(b, "c", 0.0);
        }
        c.figure = text(j, "figure", "");
    } catch (const nlohmann::json::exception& e) {
        invalid(e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidConfig) {
            throw;
        }
        invalid(e.what());
    }
    return c;
}

Json config_to_json(const RunConfig& c) {
    Json j;
    j["scenario"] = {{"type", std::string(scenario_name(c.scenario.kind))},
                     {"gamma_g", c.scenario.gamma_g},
                     {"gamma_d", c.scenario.gamma_d},
                     {"gamma_dp", c.scenario.gamma_dp},
                     {"C", c.scenario.cooperativity},
                     {"Gamma_10", c.scenario.gamma_10},
                     {"Gamma_0m1", c.scenario.gamma_0m1},
                     {"delta", c.scenario.detuning}};
    j["unit_rate"] = c.unit_rate;
    j["signal"] = {{"family", c.signal.family}, {"params", c.signal.params}};
    j["eta"] = c.eta;
    j["epsilon"] = c.epsilon ? Json(*c.epsilon) : Json(nullptr);
    j["order"] = c.order;
    Json sweep = Json::array();
    for (const auto& a : c.sweep) {
        sweep.push_back({{"name", a.name},
                         {"min", a.min},
                         {"max", a.max},
                         {"points", a.points},
                         {"scale", a.scale == AxisScale::Log ? "log" : "linear"}});
    }
    j["sweep"] = sweep;
    j["output"] = {{"path", c.output.path}, {"format", c.output.format}};
    j["optimizer"] = {{"family", c.optimizer.family}, {"grid", c.optimizer.grid}, {"tau_max", c.optimizer.tau_max}};
    j["bound"] = {{"a", c.bound.a}, {"delta", c.bound.delta}, {"b", complex_json(c.bound.b)},
                  {"c", complex_json(c.bound.c)}};
    j["figure"] = c.figure;
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        invalid("cannot read config file '" + path + "'");
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        invalid("config file '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

void apply_override(Json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        invalid("override '" + assignment + "' is not key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    Json value = Json::parse(raw, nullptr, false);
    if (value.is_discarded()) {
        value = raw;
    }
    Json* node = &j;
    for (const auto& part : split_path(key)) {
        if (node->is_array() && part.find_first_not_of("0123456789") == std::string::npos && !part.empty()) {
            const auto idx = std::stoul(part);
            if (idx >= node->size()) {
                invalid("override index out of range in '" + key + "'");
            }
            node = &(*node)[idx];
        } else {
            if (!node->is_object() && !node->is_null()) {
                invalid("override '" + key + "' descends into a non-object");
            }
            node = &(*node)[part];
        }
    }
    *node = value;
}

bool has_parameter(const Json& j, const std::string& path) {
    Json copy = j;
    const Json* node = find_path(copy, path);
    return node != nullptr && (node->is_number() || node->is_null());
}

void set_parameter(Json& j, const std::string& path, double value) {
    Json* node = find_path(j, path);
    if (node == nullptr || !(node->is_number() || node->is_null())) {
        invalid("sweep axis '" + path + "' does not name a numeric parameter");
    }
    *node = value;
}

void validate_config(const RunConfig& c) {
    if (!(c.eta > 0.0 && c.eta < 1.0)) {
        invalid("eta must lie in (0, 1)");
    }
    if (!(c.unit_rate > 0.0) || !std::isfinite(c.unit_rate)) {
        invalid("unit_rate must be positive");
    }
    if (c.epsilon && !(*c.epsilon >= 0.0 && std::isfinite(*c.epsilon))) {
        invalid("epsilon must be a finite non-negative number");
    }
    if (c.order < 0 || c.order > 12) {
        invalid("order must lie in [0, 12]");
    }
    if (c.output.format != "csv" && c.output.format != "json") {
        invalid("output format must be csv or json");
    }
    if (!kSignalFamilies.count(c.signal.family)) {
        invalid("unknown signal family '" + c.signal.family + "'");
    }
    const Json echo = config_to_json(c);
    for (const auto& a : c.sweep) {
        if (a.points < 2) {
            invalid("sweep axis '" + a.name + "' needs at least two points");
        }
        if (!has_parameter(echo, a.name)) {
            invalid("sweep axis '" + a.name + "' does not name a numeric parameter");
        }
        if (a.scale == AxisScale::Log && !(a.min > 0.0 && a.max > 0.0)) {
            invalid("log axis '" + a.name + "' needs a positive range");
        }
    }
    parse_family(c.optimizer.family);
    if (c.optimizer.grid < 2) {
        invalid("optimizer grid needs at least two points");
    }
    const PerturbativeSolver solver(make_limit_cycle(physical_scenario(c)));
    build_signal(c, solver);
}

ScenarioId physical_scenario(const RunConfig& c) {
    ScenarioId s = c.scenario;
    s.gamma_g *= c.unit_rate;
    s.gamma_d *= c.unit_rate;
    s.gamma_dp *= c.unit_rate;
    s.gamma_10 *= c.unit_rate;
    s.gamma_0m1 *= c.unit_rate;
    s.detuning *= c.unit_rate;
    return s;
}

SignalSpec build_signal(const RunConfig& c, const PerturbativeSolver& solver) {
    const Json& p = c.signal.params;
    const std::string& f = c.signal.family;
    const ScenarioId s = physical_scenario(c);
    try {
        if (f == "semiclassical") {
            reject_unknown(p, {"phase"}, "signal.params");
            return semiclassical(number(p, "phase", 0.0));
        }
        if (f == "equatorial_angles") {
            reject_unknown(p, {"zeta", "chi"}, "signal.params");
            return from_equatorial_angles(number(p, "zeta", kPi / 4.0), number(p, "chi", 0.0));
        }
        if (f == "equatorial_optimal") {
            reject_unknown(p, {}, "signal.params");
            const auto [chi, zeta] = equatorial_optimal_angles(s.gamma_g, s.gamma_d, s.detuning);
            return from_equatorial_angles(zeta, chi);
        }
        if (f == "blockade") {
            reject_unknown(p, {}, "signal.params");
            return blockade_signal(s.gamma_g, s.gamma_d, s.detuning);
        }
        if (f == "vdp") {
            reject_unknown(p, {"c", "zeta", "chi", "tau_ratio", "squeeze_phase", "align"}, "signal.params");
            const VdpSignalParams v{number(p, "c", 1.0), number(p, "zeta", kPi / 4.0), number(p, "chi", 0.0),
                                    number(p, "tau_ratio", 0.0)};
            const SignalSpec sig = from_vdp_params(v, number(p, "squeeze_phase", 0.0));
            return flag(p, "align", true) ? auto_align_squeezing(solver, sig) : sig;
        }
        if (f == "vdp_semiclassical") {
            reject_unknown(p, {"tau_ratio", "tau_opt", "squeeze_phase", "align"}, "signal.params");
            const double tau = flag(p, "tau_opt", false)
                                   ? vdp_optimal_squeeze_ratio(s.gamma_g, s.gamma_d, s.detuning)
                                   : number(p, "tau_ratio", 0.0);
            const SignalSpec sig = vdp_semiclassical_squeeze(tau, number(p, "squeeze_phase", 0.0));
            return flag(p, "align", true) ? auto_align_squeezing(solver, sig) : sig;
        }
        if (f == "vdp_optimal") {
            reject_unknown(p, {}, "signal.params");
            return auto_align_squeezing(solver, from_vdp_params(vdp_asymptotic_optimum(s.gamma_g, s.gamma_d)));
        }
        if (f == "tones") {
            reject_unknown(p, {"t01", "tm10", "tm11", "align"}, "signal.params");
            const SignalSpec sig{complex_value(p, "t01", 0.0), complex_value(p, "tm10", 0.0),
                                 complex_value(p, "tm11", 0.0)};
            return flag(p, "align", false) ? auto_align_squeezing(solver, sig) : sig;
        }
        if (f == "tightness") {
            reject_unknown(p, {}, "signal.params");
            if (s.kind != Scenario::AsymmetricEquatorial) {
                invalid("the tightness signal needs the asymmetric_equatorial scenario");
            }
            return auto_align_squeezing(solver, tightness_signal(s.gamma_g, s.gamma_d, s.gamma_dp, s.detuning));
        }
    } catch (const nlohmann::json::exception& e) {
        invalid(e.what());
    }
    invalid("unknown signal family '" + f + "'");
}

}  // namespace spinsync
