#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taskload/axis.hpp"
#include "taskload/flow.hpp"
#include "taskload/ou_process.hpp"
#include "taskload/pmf.hpp"

namespace taskload {

enum class ScenarioKind { single_lane, multilane, crossing };

/// Which aircraft are counted and for how long.
///   residency:          arrivals over [-t_cross, horizon), each counted
///                       while inside the sector and inside [0, horizon].
///   occupancy_snapshot: the aircraft present at t = 0, each followed over
///                       the whole horizon (the mixture used by the
///                       analytic lane PMF).
enum class Convention { residency, occupancy_snapshot };

struct AircraftModel {
    PerAxis<OuParams> ou{default_ou_params(Axis::lateral), default_ou_params(Axis::vertical),
                         default_ou_params(Axis::longitudinal)};
    double reset = 0.0;  // deviation after an intervention, every axis
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::single_lane;
    std::vector<FlowSpec> flows;
    std::optional<CrossingGeometry> geometry;
    AircraftModel aircraft;
    double horizon = 120.0;  // min
    GridOptions grid;
    std::uint64_t n_runs = 1000;
    std::uint64_t first_run = 0;  // runs are keyed by index, so batches can be split
    std::uint64_t seed = 1;
    Convention convention = Convention::residency;
    unsigned threads = 1;
    PerAxis<bool> axes_enabled{true, true, true};

    void validate() const;
};

struct BinEstimate {
    std::size_t n = 0;
    std::uint64_t hits = 0;
    double prob = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    bool below_floor = false;  // no observation: report as "< floor"
};

/// Named count histograms (one value per run each), plus run bookkeeping.
/// Merging is count addition, so batches combine in any order.
struct McEstimate {
    std::map<std::string, CountHistogram> series;
    std::uint64_t n_runs = 0;
    std::uint64_t n_aircraft = 0;
    double horizon = 0.0;

    void merge(const McEstimate& other);
    /// Smallest resolvable probability, 1 / n_runs.
    double resolution_floor() const;
    const CountHistogram& at(const std::string& name) const;
    TaskloadPmf pmf(const std::string& name) const;
    std::vector<BinEstimate> bins(const std::string& name) const;

    friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

/// Series names. Lane prefixes look like "lanes_1-2/lateral".
namespace series {
inline constexpr const char* lateral = "lateral";
inline constexpr const char* vertical = "vertical";
inline constexpr const char* longitudinal = "longitudinal";
inline constexpr const char* total_3d = "3d";
inline constexpr const char* conflict = "conflict_resolution";
inline constexpr const char* control = "deviation_control";
inline constexpr const char* total = "total";
inline constexpr const char* zone_occupancy = "zone_occupancy";
std::string lane_prefix(std::size_t lanes);
}  // namespace series

McEstimate run_single_lane(const ScenarioConfig& cfg);
McEstimate run_multilane(const ScenarioConfig& cfg);
McEstimate run_crossing(const ScenarioConfig& cfg);
McEstimate run_scenario(const ScenarioConfig& cfg);

struct ComparisonReport {
    double tv = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::vector<double> z_scores;  // (mc - analytic) / binomial sd under the analytic PMF; 0 where undefined
    double max_abs_z = 0.0;
};

/// Throws std::invalid_argument when both horizons are set and differ.
ComparisonReport compare(const TaskloadPmf& analytic, const CountHistogram& mc, std::optional<double> mc_horizon,
                         double threshold);

}  // namespace taskload
