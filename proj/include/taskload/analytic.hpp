#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "taskload/hitting.hpp"
#include "taskload/mc_harness.hpp"

namespace taskload {

/// Settings for the Monte Carlo first-passage density behind every analytic table.
struct DensityOracleOptions {
    std::uint64_t n_paths = 200000;
    double resolution = kDefaultDensityStep;
    std::size_t n_max = 64;
    double eps = 1e-6;
};

/// Per-aircraft intervention PMF for one axis: renewal counts of the
/// two-sided first-passage density over `horizon`, starting and restarting
/// at `reset`. The random stream is a function of (seed, axis, bound,
/// horizon), so equal inputs give bit-identical PMFs.
TaskloadPmf per_aircraft_taskload(Axis axis, const OuParams& p, double bound, double horizon, double reset,
                                  const GridOptions& grid, const DensityOracleOptions& opt, std::uint64_t seed);

/// Analytic tables named like the Monte Carlo series of the same scenario:
///   single lane: per-axis and "3d" (enabled axes convolved);
///   multilane:   the same under each "lanes_1-j/" prefix;
///   crossing:    "zone_occupancy" (A), "conflict_resolution" (conflicts over
///                the horizon), "conflict_snapshot" (max(A-1, 0)),
///                "deviation_control" (merged flows, every entry over the
///                horizon watched for its safe-zone transit) and "total"
///                (crossing combination).
struct AnalyticResult {
    std::map<std::string, TaskloadPmf> tables;
    std::optional<CrossingGeometry> geometry;
};

AnalyticResult analytic_taskload(const ScenarioConfig& cfg, const DensityOracleOptions& opt = {});

}  // namespace taskload
