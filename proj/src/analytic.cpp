#include "taskload/analytic.hpp"

#include <bit>
#include <tuple>

namespace taskload {

TaskloadPmf per_aircraft_taskload(Axis axis, const OuParams& p, double bound, double horizon, double reset,
                                  const GridOptions& grid, const DensityOracleOptions& opt, std::uint64_t seed) {
    std::uint64_t key = mix64(0x7a5c10adULL + index(axis));
    key = mix64(key ^ std::bit_cast<std::uint64_t>(bound));
    key = mix64(key ^ std::bit_cast<std::uint64_t>(horizon));
    key = mix64(key ^ std::bit_cast<std::uint64_t>(reset));
    RandomSource src(seed, key);
    const Barrier b = Barrier::two_sided(bound, reset, 0.0);
    const DensityGrid f = fpt_density_oracle(p, b, horizon, opt.resolution, opt.n_paths, src, grid);
    return intervention_pmf(f, horizon, opt.n_max, opt.eps);
}

namespace {

using CacheKey = std::tuple<std::size_t, double, double>;

struct PerAircraftCache {
    const ScenarioConfig& cfg;
    const DensityOracleOptions& opt;
    std::map<CacheKey, TaskloadPmf> store;

    const TaskloadPmf& get(Axis a, double bound, double horizon) {
        const CacheKey k{index(a), bound, horizon};
        auto it = store.find(k);
        if (it == store.end())
            it = store
                     .emplace(k, per_aircraft_taskload(a, cfg.aircraft.ou[index(a)], bound, horizon,
                                                       cfg.aircraft.reset, cfg.grid, opt, cfg.seed))
                     .first;
        return it->second;
    }

    // Enabled axes convolved (independent axes, counts add).
    TaskloadPmf combined(const ToleranceBounds& tol, double horizon) {
        TaskloadPmf out = TaskloadPmf::point_mass(0, horizon);
        for (Axis a : kAllAxes)
            if (cfg.axes_enabled[index(a)]) out = convolve_pmf(out, get(a, tol[index(a)], horizon));
        return out;
    }
};

void add_lane_tables(AnalyticResult& res, PerAircraftCache& cache, const ScenarioConfig& cfg,
                     const std::vector<FlowSpec>& flows, const std::string& prefix) {
    for (Axis a : kAllAxes) {
        if (!cfg.axes_enabled[index(a)]) continue;
        std::vector<TaskloadPmf> per;
        for (const auto& f : flows) per.push_back(cache.get(a, f.tolerance[index(a)], cfg.horizon));
        res.tables[prefix + std::string(axis_name(a))] = multilane_pmf(flows, per);
    }
    std::vector<TaskloadPmf> per3;
    for (const auto& f : flows) per3.push_back(cache.combined(f.tolerance, cfg.horizon));
    res.tables[prefix + series::total_3d] = multilane_pmf(flows, per3);
}

}  // namespace

AnalyticResult analytic_taskload(const ScenarioConfig& cfg, const DensityOracleOptions& opt) {
    cfg.validate();
    AnalyticResult res;
    PerAircraftCache cache{cfg, opt, {}};
    switch (cfg.kind) {
        case ScenarioKind::single_lane:
            add_lane_tables(res, cache, cfg, cfg.flows, "");
            break;
        case ScenarioKind::multilane:
            for (std::size_t j = 1; j <= cfg.flows.size(); ++j) {
                const std::vector<FlowSpec> prefix(cfg.flows.begin(), cfg.flows.begin() + static_cast<long>(j));
                add_lane_tables(res, cache, cfg, prefix, series::lane_prefix(j));
            }
            break;
        case ScenarioKind::crossing: {
            CrossingGeometry g = *cfg.geometry;
            if (!g.solved) g = solve_safe_zone(g);
            res.geometry = g;
            const double l1 = cfg.flows[0].intensity_per_hour;
            const double l2 = cfg.flows[1].intensity_per_hour;
            const TaskloadPmf a = conflict_pmf(g, l1, l2);
            res.tables[series::zone_occupancy] = a;
            res.tables["conflict_snapshot"] = shift_down(a, 1);
            res.tables[series::conflict] = conflict_count_pmf(g, l1, l2, cfg.horizon);
            // Control taskload is attributed to the safe-zone transit: Poisson(lambda T)
            // aircraft enter over the horizon, each watched for t_safe.
            std::vector<FlowSpec> zone_flows = cfg.flows;
            std::vector<TaskloadPmf> per;
            for (auto& f : zone_flows) {
                f.t_cross = cfg.horizon;
                per.push_back(cache.combined(f.tolerance, g.t_safe));
                per.back().horizon = cfg.horizon;
            }
            const TaskloadPmf control = multilane_pmf(zone_flows, per);
            res.tables[series::control] = control;
            res.tables[series::total] = crossing_pmf(a, control);
            break;
        }
    }
    return res;
}

}  // namespace taskload
