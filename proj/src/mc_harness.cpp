#include "taskload/mc_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "taskload/errors.hpp"

namespace taskload {

namespace series {
std::string lane_prefix(std::size_t lanes) { return "lanes_1-" + std::to_string(lanes) + "/"; }
}  // namespace series

void ScenarioConfig::validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be > 0");
    if (!(grid.dt > 0.0) || !std::isfinite(grid.dt)) throw ConfigError("dt must be > 0");
    if (grid.substeps < 1) throw ConfigError("substeps must be >= 1");
    if (n_runs == 0) throw ConfigError("n_runs must be >= 1");
    if (threads == 0) throw ConfigError("threads must be >= 1");
    if (std::none_of(axes_enabled.begin(), axes_enabled.end(), [](bool b) { return b; }))
        throw ConfigError("at least one axis must be enabled");
    for (const auto& f : flows) f.validate();
    for (const auto& p : aircraft.ou) p.validate();
    switch (kind) {
        case ScenarioKind::single_lane:
            if (flows.size() != 1) throw ConfigError("single_lane needs exactly one flow");
            break;
        case ScenarioKind::multilane:
            if (flows.empty()) throw ConfigError("multilane needs at least one flow");
            break;
        case ScenarioKind::crossing:
            if (flows.size() != 2) throw ConfigError("crossing needs exactly two flows");
            if (!geometry) throw ConfigError("crossing needs a geometry");
            geometry->validate();
            break;
    }
    for (const auto& f : flows)
        for (Axis a : kAllAxes)
            if (!(std::abs(aircraft.reset) < f.tolerance[index(a)]))
                throw ConfigError("reset point must lie strictly inside every tolerance bound");
}

void McEstimate::merge(const McEstimate& other) {
    for (const auto& [name, h] : other.series) series[name].merge(h);
    n_runs += other.n_runs;
    n_aircraft += other.n_aircraft;
    if (horizon == 0.0) horizon = other.horizon;
}

double McEstimate::resolution_floor() const {
    return n_runs > 0 ? 1.0 / static_cast<double>(n_runs) : 1.0;
}

const CountHistogram& McEstimate::at(const std::string& name) const {
    const auto it = series.find(name);
    if (it == series.end()) throw std::out_of_range("McEstimate: no series '" + name + "'");
    return it->second;
}

TaskloadPmf McEstimate::pmf(const std::string& name) const { return at(name).to_pmf(horizon); }

std::vector<BinEstimate> McEstimate::bins(const std::string& name) const {
    const CountHistogram& h = at(name);
    std::vector<BinEstimate> out;
    const std::size_t len = std::max<std::size_t>(h.size(), 1);
    for (std::size_t n = 0; n < len; ++n) {
        BinEstimate b;
        b.n = n;
        b.hits = h.count(n);
        b.prob = h.total() ? static_cast<double>(b.hits) / static_cast<double>(h.total()) : 0.0;
        const Interval ci = wilson_interval(b.hits, h.total());
        b.ci_lo = ci.lo;
        b.ci_hi = ci.hi;
        b.below_floor = b.hits == 0;
        out.push_back(b);
    }
    return out;
}

namespace {

// Child stream layout inside one (run, lane) stream.
constexpr std::uint64_t kArrivalStream = 0;
constexpr std::uint64_t kCoinStream = 1;
constexpr std::uint64_t kAircraftStreamBase = 2;

struct LaneModel {
    FlowSpec flow;
    std::vector<BarrierWalker> walkers;  // one per enabled axis
    std::vector<Axis> axes;
};

std::vector<LaneModel> build_lanes(const ScenarioConfig& cfg) {
    std::vector<LaneModel> lanes;
    for (const auto& f : cfg.flows) {
        LaneModel lm{f, {}, {}};
        for (Axis a : kAllAxes) {
            if (!cfg.axes_enabled[index(a)]) continue;
            const double tol = f.tolerance[index(a)];
            lm.walkers.emplace_back(cfg.aircraft.ou[index(a)], -tol, tol, cfg.grid);
            lm.axes.push_back(a);
        }
        lanes.push_back(std::move(lm));
    }
    return lanes;
}

struct LaneCounts {
    PerAxis<std::uint64_t> axis{};
    std::uint64_t aircraft = 0;
    std::uint64_t total() const { return axis[0] + axis[1] + axis[2]; }
};

// Counts every enabled axis of one aircraft over [t_start, t_end], counting from t = 0.
void count_aircraft(const LaneModel& lane, double reset, double t_start, double t_end, RandomSource& noise,
                    RandomSource& coin, LaneCounts& out) {
    for (std::size_t k = 0; k < lane.walkers.size(); ++k)
        out.axis[index(lane.axes[k])] += lane.walkers[k].count(reset, t_start, t_end, 0.0, reset, noise, coin);
}

LaneCounts simulate_lane(const ScenarioConfig& cfg, const LaneModel& lane, const RandomSource& lane_src) {
    LaneCounts c;
    const double rate = per_hour_to_per_minute(lane.flow.intensity_per_hour);
    if (rate <= 0.0) return c;
    RandomSource arrivals = lane_src.substream(kArrivalStream);
    RandomSource coin = lane_src.substream(kCoinStream);
    const double t_cross = lane.flow.t_cross;
    const double stop = cfg.convention == Convention::residency ? cfg.horizon : 0.0;
    double a = -t_cross + arrivals.exponential(rate);
    std::uint64_t i = 0;
    while (a < stop) {
        RandomSource noise = lane_src.substream(kAircraftStreamBase + i);
        if (cfg.convention == Convention::residency) {
            const double t_end = std::min(a + t_cross, cfg.horizon);
            if (t_end > 0.0) count_aircraft(lane, cfg.aircraft.reset, a, t_end, noise, coin, c);
        } else {
            count_aircraft(lane, cfg.aircraft.reset, 0.0, cfg.horizon, noise, coin, c);
        }
        ++c.aircraft;
        ++i;
        a += arrivals.exponential(rate);
    }
    return c;
}

RandomSource lane_stream(const ScenarioConfig& cfg, std::uint64_t run, std::size_t lane) {
    return RandomSource(cfg.seed, run).substream(lane);
}

template <typename RunFn>
McEstimate run_parallel(const ScenarioConfig& cfg, RunFn&& one_run) {
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.threads, cfg.n_runs));
    std::vector<McEstimate> parts(workers);
    auto work = [&](unsigned w) {
        const std::uint64_t lo = cfg.n_runs * w / workers;
        const std::uint64_t hi = cfg.n_runs * (w + 1) / workers;
        McEstimate& est = parts[w];
        est.horizon = cfg.horizon;
        for (std::uint64_t r = lo; r < hi; ++r) one_run(cfg.first_run + r, est);
        est.n_runs = hi - lo;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    McEstimate total;
    total.horizon = cfg.horizon;
    for (const auto& p : parts) total.merge(p);
    return total;
}

void add_axis_series(McEstimate& est, const ScenarioConfig& cfg, const std::string& prefix, const LaneCounts& c) {
    for (Axis a : kAllAxes)
        if (cfg.axes_enabled[index(a)]) est.series[prefix + std::string(axis_name(a))].add(c.axis[index(a)]);
    est.series[prefix + series::total_3d].add(c.total());
}

}  // namespace

McEstimate run_single_lane(const ScenarioConfig& cfg) {
    cfg.validate();
    if (cfg.kind != ScenarioKind::single_lane) throw ConfigError("run_single_lane: scenario kind mismatch");
    const auto lanes = build_lanes(cfg);
    return run_parallel(cfg, [&](std::uint64_t run, McEstimate& est) {
        const LaneCounts c = simulate_lane(cfg, lanes[0], lane_stream(cfg, run, 0));
        add_axis_series(est, cfg, "", c);
        est.n_aircraft += c.aircraft;
    });
}

McEstimate run_multilane(const ScenarioConfig& cfg) {
    cfg.validate();
    if (cfg.kind != ScenarioKind::multilane) throw ConfigError("run_multilane: scenario kind mismatch");
    const auto lanes = build_lanes(cfg);
    return run_parallel(cfg, [&](std::uint64_t run, McEstimate& est) {
        LaneCounts cumulative;
        for (std::size_t l = 0; l < lanes.size(); ++l) {
            const LaneCounts c = simulate_lane(cfg, lanes[l], lane_stream(cfg, run, l));
            for (std::size_t k = 0; k < 3; ++k) cumulative.axis[k] += c.axis[k];
            cumulative.aircraft += c.aircraft;
            add_axis_series(est, cfg, series::lane_prefix(l + 1), cumulative);
        }
        est.n_aircraft += cumulative.aircraft;
    });
}

McEstimate run_crossing(const ScenarioConfig& cfg) {
    cfg.validate();
    if (cfg.kind != ScenarioKind::crossing) throw ConfigError("run_crossing: scenario kind mismatch");
    CrossingGeometry g = *cfg.geometry;
    if (!g.solved) g = solve_safe_zone(g);
    const double t_safe = g.t_safe;
    const auto lanes = build_lanes(cfg);
    return run_parallel(cfg, [&](std::uint64_t run, McEstimate& est) {
        struct Entry {
            double t;
            std::size_t lane;
            std::uint64_t idx;
        };
        std::vector<Entry> entries;
        for (std::size_t l = 0; l < 2; ++l) {
            const double rate = per_hour_to_per_minute(lanes[l].flow.intensity_per_hour);
            if (rate <= 0.0) continue;
            RandomSource arrivals = lane_stream(cfg, run, l).substream(kArrivalStream);
            std::uint64_t i = 0;
            for (double a = -t_safe + arrivals.exponential(rate); a < cfg.horizon; a += arrivals.exponential(rate))
                entries.push_back({a, l, i++});
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
            return x.t < y.t || (x.t == y.t && (x.lane < y.lane || (x.lane == y.lane && x.idx < y.idx)));
        });

        std::uint64_t conflicts = 0;
        std::uint64_t in_zone_at_start = 0;
        double busy_until = -std::numeric_limits<double>::infinity();
        for (const auto& e : entries) {
            if (e.t < 0.0) ++in_zone_at_start;
            if (e.t >= 0.0 && e.t < busy_until) ++conflicts;
            busy_until = std::max(busy_until, e.t + t_safe);
        }

        LaneCounts control;
        std::array<RandomSource, 2> coins{lane_stream(cfg, run, 0).substream(kCoinStream),
                                          lane_stream(cfg, run, 1).substream(kCoinStream)};
        for (const auto& e : entries) {
            const double t_end = std::min(e.t + t_safe, cfg.horizon);
            if (t_end <= 0.0) continue;
            RandomSource noise = lane_stream(cfg, run, e.lane).substream(kAircraftStreamBase + e.idx);
            count_aircraft(lanes[e.lane], cfg.aircraft.reset, e.t, t_end, noise, coins[e.lane], control);
            ++control.aircraft;
        }

        est.series[series::conflict].add(conflicts);
        est.series[series::control].add(control.total());
        est.series[series::total].add(conflicts + control.total());
        est.series[series::zone_occupancy].add(in_zone_at_start);
        for (Axis a : kAllAxes)
            if (cfg.axes_enabled[index(a)])
                est.series[std::string(series::control) + "/" + std::string(axis_name(a))].add(
                    control.axis[index(a)]);
        est.n_aircraft += control.aircraft;
    });
}

McEstimate run_scenario(const ScenarioConfig& cfg) {
    switch (cfg.kind) {
        case ScenarioKind::single_lane: return run_single_lane(cfg);
        case ScenarioKind::multilane: return run_multilane(cfg);
        case ScenarioKind::crossing: return run_crossing(cfg);
    }
    throw ConfigError("unknown scenario kind");
}

ComparisonReport compare(const TaskloadPmf& analytic, const CountHistogram& mc, std::optional<double> mc_horizon,
                         double threshold) {
    if (analytic.horizon && mc_horizon &&
        std::abs(*analytic.horizon - *mc_horizon) > 1e-9 * std::max(1.0, std::abs(*mc_horizon)))
        throw std::invalid_argument("compare: horizon mismatch");
    if (mc.total() == 0) throw std::invalid_argument("compare: empty Monte Carlo histogram");
    ComparisonReport r;
    r.threshold = threshold;
    const TaskloadPmf emp = mc.to_pmf(mc_horizon);
    r.tv = total_variation(analytic, emp);
    r.pass = r.tv <= threshold;
    const double n = static_cast<double>(mc.total());
    const std::size_t len = std::max(analytic.size(), emp.size());
    r.z_scores.resize(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
        const double p = analytic.at(i);
        const double var = p * (1.0 - p) / n;
        if (var > 0.0) r.z_scores[i] = (emp.at(i) - p) / std::sqrt(var);
        r.max_abs_z = std::max(r.max_abs_z, std::abs(r.z_scores[i]));
    }
    return r;
}

}  // namespace taskload
