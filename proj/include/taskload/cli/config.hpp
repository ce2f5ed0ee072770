#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "taskload/analytic.hpp"
#include "taskload/distributions.hpp"
#include "taskload/mc_harness.hpp"

namespace taskload::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct GenerateSettings {
    Axis axis = Axis::lateral;
    std::uint64_t n = 1000;
    double dt = 1.0;  // min between samples, written as t_min
};

enum class CalibrateMethod { ls, mle, both };

struct CalibrateSettings {
    std::string input;  // CSV path
    CalibrateMethod method = CalibrateMethod::both;
};

struct CompareSettings {
    double threshold = 0.02;
    std::vector<std::string> series;  // empty: every series present on both sides
    std::string analytic_file;        // empty: computed from the scenario
    std::string mc_file;              // empty: simulated from the scenario
};

struct SafeZoneSettings {
    std::vector<double> angles_deg{30.0, 90.0, 120.0};
};

enum class OutputFormat { csv, json };

struct OutputSettings {
    std::string dir = ".";
    OutputFormat format = OutputFormat::csv;
};

/// Fully resolved configuration. Every field has a value; defaults are the
/// published parameter tables.
struct Config {
    int schema_version = kSchemaVersion;
    PerAxis<JohnsonSuParams> distributions{default_fte_params(Axis::lateral), default_fte_params(Axis::vertical),
                                           default_fte_params(Axis::longitudinal)};
    std::vector<ToleranceStandard> standards = tolerance_standards();
    ScenarioConfig scenario;
    DensityOracleOptions oracle;
    GenerateSettings generate;
    CalibrateSettings calibrate;
    CompareSettings compare;
    SafeZoneSettings safe_zone;
    OutputSettings output;

    const ToleranceStandard& standard(const std::string& name) const;
};

/// Default scenario per kind:
///   single_lane: 60 ac/h, stringent, 41,702 runs;
///   multilane:   four 60 ac/h lanes, stringent/severe/intermediate/lax, 10,426 runs;
///   crossing:    two 2.5 ac/h flows at 90 degrees, 10,463 runs.
Config default_config(ScenarioKind kind = ScenarioKind::single_lane);

/// Strict parse: unknown keys, wrong types and out-of-range values throw ConfigError.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& path);

/// Resolved form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const Config& c);

/// FNV-1a 64 of the compact dump.
std::uint64_t config_hash(const nlohmann::json& j);

std::string kind_name(ScenarioKind k);
std::string method_name(CalibrateMethod m);
Axis parse_axis(const std::string& s);

}  // namespace taskload::cli
