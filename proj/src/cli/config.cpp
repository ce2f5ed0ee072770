#include "taskload/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "taskload/errors.hpp"

namespace taskload::cli {

using nlohmann::json;

namespace {

// Object view that remembers which keys were read, so leftovers can be rejected.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    bool has(const char* key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json& raw(const char* key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    void number(const char* key, double& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
        out = v.get<double>();
        if (!std::isfinite(out)) throw ConfigError(where(key) + ": not finite");
    }

    template <typename U>
    void integer(const char* key, U& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
        if (v.is_number_unsigned()) {
            const auto u = v.get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(std::numeric_limits<U>::max()))
                throw ConfigError(where(key) + ": out of range");
            out = static_cast<U>(u);
        } else {
            const auto s = v.get<std::int64_t>();
            if (s < 0 && !std::numeric_limits<U>::is_signed) throw ConfigError(where(key) + ": must be >= 0");
            out = static_cast<U>(s);
        }
    }

    void string(const char* key, std::string& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
        out = v.get<std::string>();
    }

    Section object(const char* key) { return Section(raw(key), where(key)); }

    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) throw ConfigError((path_.empty() ? k : path_ + "." + k) + ": unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

ScenarioKind parse_kind(const std::string& s) {
    if (s == "single_lane") return ScenarioKind::single_lane;
    if (s == "multilane") return ScenarioKind::multilane;
    if (s == "crossing") return ScenarioKind::crossing;
    throw ConfigError("mc.kind: expected single_lane, multilane or crossing, got '" + s + "'");
}

CalibrateMethod parse_method(const std::string& s) {
    if (s == "ls") return CalibrateMethod::ls;
    if (s == "mle") return CalibrateMethod::mle;
    if (s == "both") return CalibrateMethod::both;
    throw ConfigError("calibrate.method: expected ls, mle or both, got '" + s + "'");
}

std::string convention_name(Convention c) {
    return c == Convention::residency ? "residency" : "occupancy_snapshot";
}

// Published run counts per crossing angle.
std::uint64_t crossing_runs(double alpha_deg) {
    if (alpha_deg == 30.0) return 5412;
    if (alpha_deg == 120.0) return 3826;
    return 10463;
}

ToleranceBounds read_bounds(Section s, ToleranceBounds b) {
    for (Axis a : kAllAxes) s.number(std::string(axis_column(a)).c_str(), b[index(a)]);
    s.finish();
    return b;
}

json bounds_json(const ToleranceBounds& b) {
    json j = json::object();
    for (Axis a : kAllAxes) j[std::string(axis_column(a))] = b[index(a)];
    return j;
}

}  // namespace

std::string kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::single_lane: return "single_lane";
        case ScenarioKind::multilane: return "multilane";
        case ScenarioKind::crossing: return "crossing";
    }
    return "?";
}

std::string method_name(CalibrateMethod m) {
    switch (m) {
        case CalibrateMethod::ls: return "ls";
        case CalibrateMethod::mle: return "mle";
        case CalibrateMethod::both: return "both";
    }
    return "?";
}

Axis parse_axis(const std::string& s) {
    for (Axis a : kAllAxes)
        if (s == axis_name(a)) return a;
    throw ConfigError("unknown axis '" + s + "' (lateral, vertical, longitudinal)");
}

const ToleranceStandard& Config::standard(const std::string& name) const {
    for (const auto& s : standards)
        if (s.name == name) return s;
    throw ConfigError("unknown tolerance standard '" + name + "'");
}

Config default_config(ScenarioKind kind) {
    Config c;
    ScenarioConfig& s = c.scenario;
    s.kind = kind;
    auto flow = [&](double lambda, const char* standard) {
        FlowSpec f;
        f.intensity_per_hour = lambda;
        f.tolerance = c.standard(standard).bounds;
        return f;
    };
    switch (kind) {
        case ScenarioKind::single_lane:
            s.flows = {flow(60.0, "stringent")};
            s.n_runs = 41702;
            break;
        case ScenarioKind::multilane:
            s.flows = {flow(60.0, "stringent"), flow(60.0, "severe"), flow(60.0, "intermediate"), flow(60.0, "lax")};
            s.n_runs = 10426;
            break;
        case ScenarioKind::crossing:
            s.flows = {flow(2.5, "stringent"), flow(2.5, "stringent")};
            s.geometry = CrossingGeometry{};
            s.n_runs = crossing_runs(s.geometry->alpha_deg);
            break;
    }
    return c;
}

Config parse_config(const json& j) {
    Section root(j, "");
    int version = kSchemaVersion;
    root.integer("schema_version", version);
    if (!j.contains("schema_version")) throw ConfigError("schema_version: required");
    if (version != kSchemaVersion)
        throw ConfigError("schema_version: unsupported version " + std::to_string(version) + " (expected " +
                          std::to_string(kSchemaVersion) + ")");

    ScenarioKind kind = ScenarioKind::single_lane;
    if (j.contains("mc") && j.at("mc").is_object() && j.at("mc").contains("kind")) {
        const json& k = j.at("mc").at("kind");
        if (!k.is_string()) throw ConfigError("mc.kind: expected a string");
        kind = parse_kind(k.get<std::string>());
    }
    Config c = default_config(kind);
    ScenarioConfig& sc = c.scenario;

    if (root.has("distributions")) {
        Section d = root.object("distributions");
        for (Axis a : kAllAxes) {
            const std::string name(axis_name(a));
            if (!d.has(name.c_str())) continue;
            Section p = d.object(name.c_str());
            JohnsonSuParams& jp = c.distributions[index(a)];
            p.number("gamma", jp.gamma);
            p.number("delta", jp.delta);
            p.number("lambda", jp.scale_lambda);
            p.number("xi", jp.xi);
            p.finish();
            try {
                jp.validate();
            } catch (const std::exception& e) {
                throw ConfigError("distributions." + name + ": " + e.what());
            }
        }
        d.finish();
    }

    if (root.has("ou")) {
        Section o = root.object("ou");
        for (Axis a : kAllAxes) {
            const std::string name(axis_name(a));
            if (!o.has(name.c_str())) continue;
            Section p = o.object(name.c_str());
            OuParams& op = sc.aircraft.ou[index(a)];
            p.number("kappa", op.kappa);
            p.number("mu", op.mu);
            p.number("sigma", op.sigma);
            p.finish();
            try {
                op.validate();
            } catch (const std::exception& e) {
                throw ConfigError("ou." + name + ": " + e.what());
            }
        }
        o.finish();
    }

    if (root.has("standards")) {
        const json& arr = root.raw("standards");
        if (!arr.is_array()) throw ConfigError("standards: expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Section s(arr[i], "standards[" + std::to_string(i) + "]");
            std::string name;
            s.string("name", name);
            if (name.empty()) throw ConfigError(s.where("name") + ": required");
            ToleranceBounds b{};
            auto it = std::find_if(c.standards.begin(), c.standards.end(), [&](const auto& t) { return t.name == name; });
            if (it != c.standards.end()) b = it->bounds;
            for (Axis a : kAllAxes) s.number(std::string(axis_column(a)).c_str(), b[index(a)]);
            s.finish();
            if (it != c.standards.end())
                it->bounds = b;
            else
                c.standards.push_back({name, b});
        }
    }

    if (root.has("flows")) {
        const json& arr = root.raw("flows");
        if (!arr.is_array()) throw ConfigError("flows: expected an array");
        sc.flows.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "flows[" + std::to_string(i) + "]";
            Section s(arr[i], path);
            FlowSpec f;
            f.tolerance = c.standard("stringent").bounds;
            s.number("intensity_per_hour", f.intensity_per_hour);
            s.number("t_cross_min", f.t_cross);
            s.number("speed_kt", f.speed_kt);
            s.number("lateral_extent_nm", f.lateral_extent);
            const bool named = s.has("standard");
            const bool explicit_bounds = s.has("tolerance");
            if (named && explicit_bounds) throw ConfigError(path + ": give either standard or tolerance, not both");
            if (named) {
                std::string name;
                s.string("standard", name);
                f.tolerance = c.standard(name).bounds;
            }
            if (explicit_bounds) f.tolerance = read_bounds(s.object("tolerance"), f.tolerance);
            s.finish();
            try {
                f.validate();
            } catch (const std::exception& e) {
                throw ConfigError(path + ": " + e.what());
            }
            sc.flows.push_back(f);
        }
    }

    if (root.has("geometry")) {
        Section g = root.object("geometry");
        CrossingGeometry geo = sc.geometry.value_or(CrossingGeometry{});
        g.number("alpha_deg", geo.alpha_deg);
        g.number("e1_nm", geo.e1);
        g.number("e2_nm", geo.e2);
        g.number("d_min_nm", geo.d_min);
        g.number("speed_kt", geo.speed_kt);
        g.finish();
        geo.validate();
        sc.geometry = geo;
    }

    bool runs_given = false;
    if (root.has("mc")) {
        Section m = root.object("mc");
        std::string unused;
        m.string("kind", unused);
        runs_given = m.has("runs");
        m.integer("runs", sc.n_runs);
        m.integer("first_run", sc.first_run);
        m.integer("seed", sc.seed);
        m.number("dt_min", sc.grid.dt);
        m.integer("substeps", sc.grid.substeps);
        m.integer("bridge_depth", sc.grid.bridge_depth);
        m.number("horizon_min", sc.horizon);
        m.integer("threads", sc.threads);
        m.number("reset", sc.aircraft.reset);
        if (m.has("crossing_check")) {
            std::string s;
            m.string("crossing_check", s);
            if (s == "grid")
                sc.grid.crossing = CrossingCheck::grid;
            else if (s == "bridge")
                sc.grid.crossing = CrossingCheck::bridge;
            else
                throw ConfigError("mc.crossing_check: expected grid or bridge");
        }
        if (m.has("convention")) {
            std::string s;
            m.string("convention", s);
            if (s == "residency")
                sc.convention = Convention::residency;
            else if (s == "occupancy_snapshot")
                sc.convention = Convention::occupancy_snapshot;
            else
                throw ConfigError("mc.convention: expected residency or occupancy_snapshot");
        }
        if (m.has("axes")) {
            const json& arr = m.raw("axes");
            if (!arr.is_array()) throw ConfigError("mc.axes: expected an array of axis names");
            sc.axes_enabled = {false, false, false};
            for (const auto& v : arr) {
                if (!v.is_string()) throw ConfigError("mc.axes: expected axis names");
                sc.axes_enabled[index(parse_axis(v.get<std::string>()))] = true;
            }
        }
        m.finish();
        if (sc.grid.bridge_depth > kMaxBridgeDepth)
            throw ConfigError("mc.bridge_depth: at most " + std::to_string(kMaxBridgeDepth));
    }
    if (!runs_given && sc.kind == ScenarioKind::crossing && sc.geometry) sc.n_runs = crossing_runs(sc.geometry->alpha_deg);

    if (root.has("analytic")) {
        Section a = root.object("analytic");
        a.integer("oracle_paths", c.oracle.n_paths);
        a.number("resolution_min", c.oracle.resolution);
        a.integer("n_max", c.oracle.n_max);
        a.number("eps", c.oracle.eps);
        a.finish();
        if (c.oracle.n_paths == 0) throw ConfigError("analytic.oracle_paths: must be >= 1");
        if (!(c.oracle.resolution > 0.0)) throw ConfigError("analytic.resolution_min: must be > 0");
        if (!(c.oracle.eps > 0.0 && c.oracle.eps < 1.0)) throw ConfigError("analytic.eps: must lie in (0, 1)");
    }

    if (root.has("generate")) {
        Section g = root.object("generate");
        if (g.has("axis")) {
            std::string s;
            g.string("axis", s);
            c.generate.axis = parse_axis(s);
        }
        g.integer("n", c.generate.n);
        g.number("dt_min", c.generate.dt);
        g.finish();
        if (!(c.generate.dt > 0.0)) throw ConfigError("generate.dt_min: must be > 0");
    }

    if (root.has("calibrate")) {
        Section k = root.object("calibrate");
        k.string("input", c.calibrate.input);
        if (k.has("method")) {
            std::string s;
            k.string("method", s);
            c.calibrate.method = parse_method(s);
        }
        k.finish();
    }

    if (root.has("compare")) {
        Section k = root.object("compare");
        k.number("threshold", c.compare.threshold);
        k.string("analytic_file", c.compare.analytic_file);
        k.string("mc_file", c.compare.mc_file);
        if (k.has("series")) {
            const json& arr = k.raw("series");
            if (!arr.is_array()) throw ConfigError("compare.series: expected an array of names");
            c.compare.series.clear();
            for (const auto& v : arr) {
                if (!v.is_string()) throw ConfigError("compare.series: expected names");
                c.compare.series.push_back(v.get<std::string>());
            }
        }
        k.finish();
        if (!(c.compare.threshold >= 0.0 && c.compare.threshold <= 1.0))
            throw ConfigError("compare.threshold: must lie in [0, 1]");
    }

    if (root.has("safe_zone")) {
        Section z = root.object("safe_zone");
        if (z.has("angles_deg")) {
            const json& arr = z.raw("angles_deg");
            if (!arr.is_array() || arr.empty()) throw ConfigError("safe_zone.angles_deg: expected a non-empty array");
            c.safe_zone.angles_deg.clear();
            for (const auto& v : arr) {
                if (!v.is_number()) throw ConfigError("safe_zone.angles_deg: expected numbers");
                c.safe_zone.angles_deg.push_back(v.get<double>());
            }
        }
        z.finish();
    }

    if (root.has("output")) {
        Section o = root.object("output");
        o.string("dir", c.output.dir);
        if (o.has("format")) {
            std::string s;
            o.string("format", s);
            if (s == "csv")
                c.output.format = OutputFormat::csv;
            else if (s == "json")
                c.output.format = OutputFormat::json;
            else
                throw ConfigError("output.format: expected csv or json");
        }
        o.finish();
    }
    root.finish();

    sc.validate();
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config");
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(j);
}

json to_json(const Config& c) {
    const ScenarioConfig& sc = c.scenario;
    json j;
    j["schema_version"] = c.schema_version;
    for (Axis a : kAllAxes) {
        const auto& d = c.distributions[index(a)];
        j["distributions"][std::string(axis_name(a))] = {
            {"gamma", d.gamma}, {"delta", d.delta}, {"lambda", d.scale_lambda}, {"xi", d.xi}};
        const auto& o = sc.aircraft.ou[index(a)];
        j["ou"][std::string(axis_name(a))] = {{"kappa", o.kappa}, {"mu", o.mu}, {"sigma", o.sigma}};
    }
    j["standards"] = json::array();
    for (const auto& s : c.standards) {
        json e = bounds_json(s.bounds);
        e["name"] = s.name;
        j["standards"].push_back(e);
    }
    j["flows"] = json::array();
    for (const auto& f : sc.flows)
        j["flows"].push_back({{"intensity_per_hour", f.intensity_per_hour},
                              {"t_cross_min", f.t_cross},
                              {"speed_kt", f.speed_kt},
                              {"lateral_extent_nm", f.lateral_extent},
                              {"tolerance", bounds_json(f.tolerance)}});
    if (sc.geometry) {
        const auto& g = *sc.geometry;
        j["geometry"] = {
            {"alpha_deg", g.alpha_deg}, {"e1_nm", g.e1}, {"e2_nm", g.e2}, {"d_min_nm", g.d_min}, {"speed_kt", g.speed_kt}};
    }
    json axes = json::array();
    for (Axis a : kAllAxes)
        if (sc.axes_enabled[index(a)]) axes.push_back(std::string(axis_name(a)));
    j["mc"] = {{"kind", kind_name(sc.kind)},
               {"runs", sc.n_runs},
               {"first_run", sc.first_run},
               {"seed", sc.seed},
               {"dt_min", sc.grid.dt},
               {"substeps", sc.grid.substeps},
               {"bridge_depth", sc.grid.bridge_depth},
               {"crossing_check", sc.grid.crossing == CrossingCheck::grid ? "grid" : "bridge"},
               {"horizon_min", sc.horizon},
               {"convention", convention_name(sc.convention)},
               {"threads", sc.threads},
               {"reset", sc.aircraft.reset},
               {"axes", axes}};
    j["analytic"] = {{"oracle_paths", c.oracle.n_paths},
                     {"resolution_min", c.oracle.resolution},
                     {"n_max", c.oracle.n_max},
                     {"eps", c.oracle.eps}};
    j["generate"] = {{"axis", std::string(axis_name(c.generate.axis))}, {"n", c.generate.n}, {"dt_min", c.generate.dt}};
    j["calibrate"] = {{"input", c.calibrate.input}, {"method", method_name(c.calibrate.method)}};
    j["compare"] = {{"threshold", c.compare.threshold},
                    {"series", c.compare.series},
                    {"analytic_file", c.compare.analytic_file},
                    {"mc_file", c.compare.mc_file}};
    j["safe_zone"] = {{"angles_deg", c.safe_zone.angles_deg}};
    j["output"] = {{"dir", c.output.dir}, {"format", c.output.format == OutputFormat::csv ? "csv" : "json"}};
    return j;
}

std::uint64_t config_hash(const json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace taskload::cli
