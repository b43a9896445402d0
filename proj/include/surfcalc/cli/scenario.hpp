#pragma once

#include "surfcalc/calculus/constitutive.hpp"
#include "surfcalc/calculus/fields.hpp"
#include "surfcalc/errors.hpp"
#include "surfcalc/geometry/flow_map.hpp"
#include "surfcalc/solver/barotropic.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace surfcalc::cli {

using Json = nlohmann::json;

enum class Suite { Geometry, Identities, Variational, Action, Barotropic, Diffusion, Manufactured, Entropy };

inline constexpr std::array<Suite, 8> all_suites = {Suite::Geometry,   Suite::Identities, Suite::Variational,  Suite::Action,
                                                    Suite::Barotropic, Suite::Diffusion,  Suite::Manufactured, Suite::Entropy};

inline std::string to_string(Suite s) {
    switch (s) {
        case Suite::Geometry: return "geometry";
        case Suite::Identities: return "identities";
        case Suite::Variational: return "variational";
        case Suite::Action: return "action";
        case Suite::Barotropic: return "barotropic";
        case Suite::Diffusion: return "diffusion";
        case Suite::Manufactured: return "manufactured";
        case Suite::Entropy: return "entropy";
    }
    return "?";
}

inline std::string suite_description(Suite s) {
    switch (s) {
        case Suite::Geometry: return "pointwise metric invariants (projection, inverse metric, normals, co-normals)";
        case Suite::Identities: return "energy representations, divergence theorem, integration by parts, transport theorem";
        case Suite::Variational: return "Gateaux derivatives of the four functionals against their force pairings (seeded directions)";
        case Suite::Action: return "flow-map variation of the kinetic and barotropic actions";
        case Suite::Barotropic: return "tangential barotropic run: mass drift and energy law";
        case Suite::Diffusion: return "surface diffusion run: conservation of the total amount";
        case Suite::Manufactured: return "generalized system and thermodynamic balances on a manufactured thermal state";
        case Suite::Entropy: return "pointwise entropy production of the constitutive set on a manufactured state";
    }
    return "";
}

/// Pass criteria of one suite. Residuals are taken at the finest resolution; the order bound is
/// waived when the finest residual is already below `exact_floor`.
struct Tolerance {
    double residual = 1e-3;
    std::optional<double> min_order;
    double exact_floor = 1e-11;
};

inline Tolerance default_tolerance(Suite s) {
    switch (s) {
        case Suite::Geometry: return {1e-10, std::nullopt, 1e-11};
        case Suite::Identities: return {1e-3, 1.9, 1e-11};
        case Suite::Variational: return {1e-3, std::nullopt, 1e-11};
        case Suite::Action: return {1e-2, 1.9, 1e-11};
        case Suite::Barotropic: return {1e-3, 1.9, 1e-11};
        case Suite::Diffusion: return {1e-10, std::nullopt, 1e-11};
        case Suite::Manufactured: return {1e-1, 1.9, 1e-11};
        case Suite::Entropy: return {1e-12, std::nullopt, 1e-11};
    }
    return {};
}

enum class StepPolicy {
    Cfl,     // solvers use `value` as their CFL fraction; probes use dt = h / 2
    Fixed,   // dt = value everywhere
    Scaled,  // dt = value * h
};

struct TimeStep {
    StepPolicy policy = StepPolicy::Cfl;
    double value = 0.4;

    /// Step for difference quotients and sampled time levels at grid spacing h.
    double probe(double h) const {
        switch (policy) {
            case StepPolicy::Cfl: return 0.5 * h;
            case StepPolicy::Fixed: return value;
            case StepPolicy::Scaled: return value * h;
        }
        return 0.5 * h;
    }

    /// Step handed to a solver run; 0 lets the solver pick its CFL step.
    double solver(double h) const { return policy == StepPolicy::Cfl ? 0.0 : probe(h); }
};

struct FieldChoice {
    std::string sigma = "warm";
    std::string theta = "warm";
    std::string concentration = "gaussian";
    std::string density = "warm";
    std::string velocity = "zero";
    std::string force = "constant";
    std::string divergence_field = "swirl";
    std::string test_function = "gaussian";
    std::string weight = "x1";
};

struct NamedParams {
    std::string name;
    ParamMap params;
};

struct Scenario {
    std::string name = "scenario";
    NamedParams surface;
    std::vector<int> resolutions;
    int azimuth_factor = 1;
    double t_start = 0.0;
    double t_end = 1.0;
    double t_probe = 0.0;
    TimeStep time_step;
    FieldChoice fields;
    NamedParams constitutive{"newtonian", {}};
    NamedParams pressure{"quadratic", {}};
    BoundaryMode bc_mode = BoundaryMode::NoSlip;
    std::uint64_t seed = 1;
    std::vector<Suite> suites;
    std::map<Suite, Tolerance> tolerances;
    std::string output = "reports";

    bool selected(Suite s) const { return std::find(suites.begin(), suites.end(), s) != suites.end(); }
    const Tolerance& tolerance(Suite s) const { return tolerances.at(s); }

    FlowMapSpec make_surface() const { return surfaces::find(surface.name)->make(surface.params); }

    ConstitutiveSet make_constitutive() const {
        ConstitutiveSet cs;
        for (const auto& e : constitutive::catalog())
            if (e.name == constitutive.name) cs = e.make(constitutive.params);
        for (const auto& e : constitutive::pressure_catalog())
            if (e.name == pressure.name) cs.pressure = e.make(pressure.params);
        return cs;
    }

    PressureLaw make_pressure() const { return make_constitutive().pressure; }

    AmbientScalarFn scalar(const std::string& name) const { return fields::find_scalar(fields::scalar_catalog(seed), name)->fn; }
    AmbientVectorFn vector(const std::string& name) const { return fields::find_vector(fields::vector_catalog(seed), name)->fn; }

    int azimuthal(int n) const { return azimuth_factor * n; }
};

namespace detail {

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline std::string type_name(const Json& j) { return j.type_name(); }

inline void reject_unknown(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError(join(path, it.key()), "unknown key");
    }
}

inline const Json& require_object(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object, got " + type_name(j));
    return j;
}

inline double number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number, got " + type_name(j));
    return j.get<double>();
}

inline double positive(const Json& j, const std::string& path) {
    const double x = number(j, path);
    if (!(x > 0.0)) throw ConfigError(path, "must be positive");
    return x;
}

inline std::string string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string, got " + type_name(j));
    return j.get<std::string>();
}

inline bool boolean(const Json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected true or false, got " + type_name(j));
    return j.get<bool>();
}

inline std::int64_t integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer, got " + type_name(j));
    return j.get<std::int64_t>();
}

/// {"name": ..., "params": {...}} checked against a catalog schema.
inline NamedParams named_params(const Json& j, const std::string& path, const std::vector<ParamSchema>* (*schema)(const std::string&),
                                const std::string& what) {
    NamedParams out;
    if (j.is_string()) {
        out.name = j.get<std::string>();
        if (!schema(out.name)) throw ConfigError(path, "unknown " + what + " '" + out.name + "'");
        return out;
    }
    require_object(j, path);
    reject_unknown(j, path, {"name", "params"});
    if (!j.contains("name")) throw ConfigError(join(path, "name"), "missing");
    out.name = string(j["name"], join(path, "name"));
    const auto* params = schema(out.name);
    if (!params) throw ConfigError(join(path, "name"), "unknown " + what + " '" + out.name + "'");
    if (j.contains("params")) {
        const std::string pp = join(path, "params");
        require_object(j["params"], pp);
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
            bool known = false;
            for (const auto& p : *params) known = known || p.name == it.key();
            if (!known) throw ConfigError(join(pp, it.key()), "not a parameter of " + what + " '" + out.name + "'");
            out.params[it.key()] = number(it.value(), join(pp, it.key()));
        }
    }
    return out;
}

inline const std::vector<ParamSchema>* surface_schema(const std::string& name) {
    const auto* e = surfaces::find(name);
    return e ? &e->params : nullptr;
}

inline const std::vector<ParamSchema>* constitutive_schema(const std::string& name) {
    for (const auto& e : constitutive::catalog())
        if (e.name == name) return &e.params;
    return nullptr;
}

inline const std::vector<ParamSchema>* pressure_schema(const std::string& name) {
    for (const auto& e : constitutive::pressure_catalog())
        if (e.name == name) return &e.params;
    return nullptr;
}

inline std::optional<Suite> suite_from(const std::string& name) {
    for (Suite s : all_suites)
        if (to_string(s) == name) return s;
    return std::nullopt;
}

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace detail

/// Builds a Scenario from parsed JSON; every violation names its field path.
inline Scenario scenario_from_json(const Json& root) {
    using namespace detail;
    require_object(root, "<root>");
    reject_unknown(root, "", {"name", "surface", "resolutions", "azimuth_factor", "time", "time_step", "fields", "constitutive", "bc_mode",
                              "seed", "suites", "tolerances", "output"});
    Scenario sc;
    if (root.contains("name")) sc.name = string(root["name"], "name");

    if (!root.contains("surface")) throw ConfigError("surface", "missing");
    sc.surface = named_params(root["surface"], "surface", &surface_schema, "surface");

    if (!root.contains("resolutions")) throw ConfigError("resolutions", "missing");
    const Json& res = root["resolutions"];
    if (!res.is_array()) throw ConfigError("resolutions", "expected an array, got " + type_name(res));
    for (std::size_t q = 0; q < res.size(); ++q) {
        const std::string p = "resolutions[" + std::to_string(q) + "]";
        const auto n = integer(res[q], p);
        if (n < 8) throw ConfigError(p, "resolution must be at least 8");
        if (!sc.resolutions.empty() && n <= sc.resolutions.back()) throw ConfigError(p, "resolutions must be strictly increasing");
        sc.resolutions.push_back(static_cast<int>(n));
    }
    if (sc.resolutions.size() < 3) throw ConfigError("resolutions", "at least 3 resolutions are needed for order estimates");

    if (root.contains("azimuth_factor")) {
        const auto f = integer(root["azimuth_factor"], "azimuth_factor");
        if (f < 1) throw ConfigError("azimuth_factor", "must be a positive integer");
        sc.azimuth_factor = static_cast<int>(f);
    }
    const FlowMapSpec spec = sc.make_surface();
    if (spec.domain.kind() == DomainKind::DiskPolar)
        for (int n : sc.resolutions)
            if (sc.azimuthal(n) % 2 != 0) throw ConfigError("resolutions", "polar grids need an even azimuthal count");

    if (root.contains("time")) {
        const Json& t = require_object(root["time"], "time");
        reject_unknown(t, "time", {"start", "end", "probe"});
        if (t.contains("start")) sc.t_start = number(t["start"], "time.start");
        if (t.contains("end")) sc.t_end = number(t["end"], "time.end");
        sc.t_probe = t.contains("probe") ? number(t["probe"], "time.probe") : sc.t_start;
        if (!(sc.t_end > sc.t_start)) throw ConfigError("time.end", "must exceed time.start");
    }

    if (root.contains("time_step")) {
        const Json& ts = require_object(root["time_step"], "time_step");
        reject_unknown(ts, "time_step", {"policy", "cfl", "dt", "factor"});
        const std::string policy = ts.contains("policy") ? string(ts["policy"], "time_step.policy") : "cfl";
        if (policy == "cfl") {
            sc.time_step = {StepPolicy::Cfl, ts.contains("cfl") ? positive(ts["cfl"], "time_step.cfl") : 0.4};
        } else if (policy == "fixed") {
            if (!ts.contains("dt")) throw ConfigError("time_step.dt", "missing for policy 'fixed'");
            sc.time_step = {StepPolicy::Fixed, positive(ts["dt"], "time_step.dt")};
        } else if (policy == "scaled") {
            if (!ts.contains("factor")) throw ConfigError("time_step.factor", "missing for policy 'scaled'");
            sc.time_step = {StepPolicy::Scaled, positive(ts["factor"], "time_step.factor")};
        } else {
            throw ConfigError("time_step.policy", "unknown policy '" + policy + "' (cfl, fixed, scaled)");
        }
    }

    if (root.contains("seed")) {
        const auto s = integer(root["seed"], "seed");
        if (s < 0) throw ConfigError("seed", "must be nonnegative");
        sc.seed = static_cast<std::uint64_t>(s);
    }

    if (root.contains("fields")) {
        const Json& f = require_object(root["fields"], "fields");
        reject_unknown(f, "fields", {"sigma", "theta", "concentration", "density", "velocity", "force", "divergence_field", "test_function", "weight"});
        const auto scalars = fields::scalar_catalog(sc.seed);
        const auto vectors = fields::vector_catalog(sc.seed);
        auto scalar = [&](const char* key, std::string& slot) {
            if (!f.contains(key)) return;
            slot = string(f[key], join("fields", key));
            if (!fields::find_scalar(scalars, slot)) throw ConfigError(join("fields", key), "unknown scalar field '" + slot + "'");
        };
        auto vector = [&](const char* key, std::string& slot) {
            if (!f.contains(key)) return;
            slot = string(f[key], join("fields", key));
            if (!fields::find_vector(vectors, slot)) throw ConfigError(join("fields", key), "unknown vector field '" + slot + "'");
        };
        scalar("sigma", sc.fields.sigma);
        scalar("theta", sc.fields.theta);
        scalar("concentration", sc.fields.concentration);
        scalar("density", sc.fields.density);
        vector("velocity", sc.fields.velocity);
        vector("force", sc.fields.force);
        vector("divergence_field", sc.fields.divergence_field);
        scalar("test_function", sc.fields.test_function);
        scalar("weight", sc.fields.weight);
    }

    if (root.contains("constitutive")) {
        const Json& c = root["constitutive"];
        if (c.is_object() && c.contains("pressure")) {
            Json rest = c;
            rest.erase("pressure");
            sc.constitutive = named_params(rest, "constitutive", &constitutive_schema, "constitutive set");
            sc.pressure = named_params(c["pressure"], "constitutive.pressure", &pressure_schema, "pressure law");
        } else {
            sc.constitutive = named_params(c, "constitutive", &constitutive_schema, "constitutive set");
        }
    }

    if (root.contains("bc_mode")) {
        const std::string m = string(root["bc_mode"], "bc_mode");
        if (m == "no-slip") sc.bc_mode = BoundaryMode::NoSlip;
        else if (m == "stress-free") sc.bc_mode = BoundaryMode::StressFree;
        else throw ConfigError("bc_mode", "unknown boundary mode '" + m + "' (no-slip, stress-free)");
    }

    if (root.contains("suites")) {
        const Json& s = require_object(root["suites"], "suites");
        for (auto it = s.begin(); it != s.end(); ++it) {
            const auto suite = suite_from(it.key());
            if (!suite) throw ConfigError(join("suites", it.key()), "unknown suite");
            if (boolean(it.value(), join("suites", it.key()))) sc.suites.push_back(*suite);
        }
        std::sort(sc.suites.begin(), sc.suites.end());
    }

    for (Suite s : all_suites) sc.tolerances[s] = default_tolerance(s);
    if (root.contains("tolerances")) {
        const Json& t = require_object(root["tolerances"], "tolerances");
        for (auto it = t.begin(); it != t.end(); ++it) {
            const std::string p = join("tolerances", it.key());
            const auto suite = suite_from(it.key());
            if (!suite) throw ConfigError(p, "unknown suite");
            const Json& o = require_object(it.value(), p);
            reject_unknown(o, p, {"residual", "min_order", "exact_floor"});
            Tolerance& tol = sc.tolerances[*suite];
            if (o.contains("residual")) tol.residual = positive(o["residual"], join(p, "residual"));
            if (o.contains("min_order")) {
                if (o["min_order"].is_null()) tol.min_order.reset();
                else tol.min_order = number(o["min_order"], join(p, "min_order"));
            }
            if (o.contains("exact_floor")) tol.exact_floor = positive(o["exact_floor"], join(p, "exact_floor"));
        }
    }

    if (root.contains("output")) sc.output = string(root["output"], "output");
    return sc;
}

/// Parses scenario text; syntax errors carry line and column.
inline Scenario parse_scenario(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError("<syntax>", "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    return scenario_from_json(root);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<file>", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

/// Canonical JSON of a scenario; parse(to_json(sc)) reproduces sc.
inline Json to_json(const Scenario& sc) {
    Json j;
    j["name"] = sc.name;
    j["surface"] = {{"name", sc.surface.name}, {"params", sc.surface.params}};
    j["resolutions"] = sc.resolutions;
    j["azimuth_factor"] = sc.azimuth_factor;
    j["time"] = {{"start", sc.t_start}, {"end", sc.t_end}, {"probe", sc.t_probe}};
    switch (sc.time_step.policy) {
        case StepPolicy::Cfl: j["time_step"] = {{"policy", "cfl"}, {"cfl", sc.time_step.value}}; break;
        case StepPolicy::Fixed: j["time_step"] = {{"policy", "fixed"}, {"dt", sc.time_step.value}}; break;
        case StepPolicy::Scaled: j["time_step"] = {{"policy", "scaled"}, {"factor", sc.time_step.value}}; break;
    }
    j["fields"] = {{"sigma", sc.fields.sigma},
                   {"theta", sc.fields.theta},
                   {"concentration", sc.fields.concentration},
                   {"density", sc.fields.density},
                   {"velocity", sc.fields.velocity},
                   {"force", sc.fields.force},
                   {"divergence_field", sc.fields.divergence_field},
                   {"test_function", sc.fields.test_function},
                   {"weight", sc.fields.weight}};
    j["constitutive"] = {{"name", sc.constitutive.name},
                         {"params", sc.constitutive.params},
                         {"pressure", {{"name", sc.pressure.name}, {"params", sc.pressure.params}}}};
    j["bc_mode"] = to_string(sc.bc_mode);
    j["seed"] = sc.seed;
    Json suites = Json::object();
    for (Suite s : all_suites) suites[to_string(s)] = sc.selected(s);
    j["suites"] = suites;
    Json tol = Json::object();
    for (const auto& [s, t] : sc.tolerances) {
        Json o = {{"residual", t.residual}, {"exact_floor", t.exact_floor}};
        o["min_order"] = t.min_order ? Json(*t.min_order) : Json(nullptr);
        tol[to_string(s)] = o;
    }
    j["tolerances"] = tol;
    j["output"] = sc.output;
    return j;
}

}  // namespace surfcalc::cli
