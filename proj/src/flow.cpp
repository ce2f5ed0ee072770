#include "taskload/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "taskload/errors.hpp"

namespace taskload {

const std::vector<ToleranceStandard>& tolerance_standards() {
    static const std::vector<ToleranceStandard> table{
        {"stringent", {0.1, 20.0, 0.5}},
        {"severe", {0.12, 22.0, 0.6}},
        {"intermediate", {0.15, 25.0, 0.8}},
        {"lax", {0.2, 30.0, 1.0}},
    };
    return table;
}

ToleranceStandard tolerance_standard(std::string_view name) {
    for (const auto& s : tolerance_standards())
        if (s.name == name) return s;
    throw ConfigError("unknown tolerance standard '" + std::string(name) + "'");
}

void FlowSpec::validate() const {
    if (!(intensity_per_hour >= 0.0) || !std::isfinite(intensity_per_hour))
        throw ConfigError("flow intensity must be >= 0");
    if (!(t_cross > 0.0) || !std::isfinite(t_cross)) throw ConfigError("flow t_cross must be > 0");
    if (!(speed_kt > 0.0) || !std::isfinite(speed_kt)) throw ConfigError("flow speed must be > 0");
    for (double b : tolerance)
        if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("flow tolerances must be > 0");
    if (!(lateral_extent >= 0.0)) throw ConfigError("flow lateral_extent must be >= 0");
}

TaskloadPmf poisson_occupancy(const FlowSpec& flow, double eps) {
    flow.validate();
    return poisson_pmf(flow.expected_occupancy(), eps);
}

TaskloadPmf single_lane_pmf(const FlowSpec& flow, const TaskloadPmf& per_aircraft, double eps) {
    const TaskloadPmf occ = poisson_occupancy(flow, 0.01 * eps);
    TaskloadPmf out;
    out.horizon = per_aircraft.horizon;
    out.probs.assign(1, 0.0);
    TaskloadPmf power = TaskloadPmf::point_mass(0, per_aircraft.horizon);
    double used = 0.0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (i > 0) power = convolve_pmf(power, per_aircraft);
        const double w = occ.probs[i];
        if (power.size() > out.size()) out.probs.resize(power.size(), 0.0);
        for (std::size_t n = 0; n < power.size(); ++n) out.probs[n] += w * power.probs[n];
        out.truncation_mass += w * power.truncation_mass;
        used += w;
        if (1.0 - used < eps) break;
    }
    out.truncation_mass += std::max(0.0, 1.0 - used);
    while (out.probs.size() > 1 && out.probs.back() == 0.0) out.probs.pop_back();
    return out;
}

namespace {

bool same_lane_model(const FlowSpec& a, const FlowSpec& b, const TaskloadPmf& pa, const TaskloadPmf& pb) {
    return a.tolerance == b.tolerance && a.t_cross == b.t_cross && pa.probs == pb.probs &&
           pa.truncation_mass == pb.truncation_mass && pa.horizon == pb.horizon;
}

}  // namespace

TaskloadPmf multilane_pmf(const std::vector<FlowSpec>& flows, const std::vector<TaskloadPmf>& per_aircraft,
                          double eps) {
    if (flows.empty()) throw std::invalid_argument("multilane_pmf: no flows");
    if (flows.size() != per_aircraft.size())
        throw std::invalid_argument("multilane_pmf: one per-aircraft PMF per flow is required");

    // Group lanes with an identical model; each group is one pooled Poisson flow.
    std::vector<std::size_t> leader;
    std::vector<FlowSpec> pooled;
    for (std::size_t i = 0; i < flows.size(); ++i) {
        bool merged = false;
        for (std::size_t g = 0; g < leader.size(); ++g) {
            const std::size_t j = leader[g];
            if (same_lane_model(flows[i], flows[j], per_aircraft[i], per_aircraft[j])) {
                pooled[g].intensity_per_hour += flows[i].intensity_per_hour;
                merged = true;
                break;
            }
        }
        if (!merged) {
            leader.push_back(i);
            pooled.push_back(flows[i]);
        }
    }
    TaskloadPmf total = single_lane_pmf(pooled[0], per_aircraft[leader[0]], eps);
    for (std::size_t g = 1; g < pooled.size(); ++g)
        total = convolve_pmf(total, single_lane_pmf(pooled[g], per_aircraft[leader[g]], eps));
    return total;
}

TaskloadPmf conflict_pmf(const CrossingGeometry& g, double lambda1_per_hour, double lambda2_per_hour, double eps) {
    if (!g.solved) throw std::invalid_argument("conflict_pmf: geometry not solved");
    if (!(lambda1_per_hour >= 0.0) || !(lambda2_per_hour >= 0.0))
        throw std::invalid_argument("conflict_pmf: intensities must be >= 0");
    return poisson_pmf(per_hour_to_per_minute(lambda1_per_hour + lambda2_per_hour) * g.t_safe, eps);
}

TaskloadPmf conflict_count_pmf(const CrossingGeometry& g, double lambda1_per_hour, double lambda2_per_hour,
                               double horizon, std::optional<double> step, std::size_t n_max) {
    if (!g.solved) throw std::invalid_argument("conflict_count_pmf: geometry not solved");
    if (!(horizon > 0.0)) throw std::invalid_argument("conflict_count_pmf: horizon must be > 0");
    const double rate = per_hour_to_per_minute(lambda1_per_hour + lambda2_per_hour);
    TaskloadPmf out;
    out.horizon = horizon;
    if (rate == 0.0 || g.t_safe <= 0.0) {
        out.probs = {1.0};
        return out;
    }
    const double h = step.value_or(g.t_safe / 100.0);
    const auto m = static_cast<std::size_t>(std::max(1.0, std::round(g.t_safe / h)));
    const double hh = g.t_safe / static_cast<double>(m);
    const auto steps = static_cast<std::size_t>(std::round(horizon / hh));

    // state[r][k]: r steps of occupancy remain, k conflicts so far.
    const std::size_t kdim = n_max + 1;
    std::vector<double> cur((m + 1) * kdim, 0.0);
    std::vector<double> next(cur.size());
    auto at = [kdim](std::vector<double>& v, std::size_t r, std::size_t k) -> double& { return v[r * kdim + k]; };

    // Stationary start: the last entry before t = 0 was u ago, with density rate e^{-rate u}.
    at(cur, 0, 0) = std::exp(-rate * g.t_safe);
    for (std::size_t r = 1; r <= m; ++r) {
        const double u_hi = g.t_safe - (static_cast<double>(r) - 1.0) * hh;
        const double u_lo = g.t_safe - static_cast<double>(r) * hh;
        at(cur, r, 0) = std::exp(-rate * u_lo) - std::exp(-rate * u_hi);
    }

    const double q = -std::expm1(-rate * hh);
    double overflow = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t r = 0; r <= m; ++r) {
            for (std::size_t k = 0; k < kdim; ++k) {
                const double v = at(cur, r, k);
                if (v == 0.0) continue;
                // entry during this step
                const std::size_t k_hit = r > 0 ? k + 1 : k;
                if (k_hit < kdim)
                    at(next, m, k_hit) += v * q;
                else
                    overflow += v * q;
                at(next, r > 0 ? r - 1 : 0, k) += v * (1.0 - q);
            }
        }
        cur.swap(next);
    }
    out.probs.assign(kdim, 0.0);
    for (std::size_t r = 0; r <= m; ++r)
        for (std::size_t k = 0; k < kdim; ++k) out.probs[k] += at(cur, r, k);
    out.truncation_mass = overflow;
    while (out.probs.size() > 1 && out.probs.back() == 0.0) out.probs.pop_back();
    return out;
}

TaskloadPmf crossing_pmf(const TaskloadPmf& occupancy_a, const TaskloadPmf& merged_control) {
    TaskloadPmf out;
    out.horizon = merged_control.horizon;
    const std::size_t len = std::max<std::size_t>(1, occupancy_a.size() + merged_control.size());
    out.probs.assign(len, 0.0);
    out.probs[0] = occupancy_a.at(0) + occupancy_a.at(1) * merged_control.at(0);
    for (std::size_t n = 1; n < len; ++n) {
        double s = 0.0;
        for (std::size_t i = 0; i <= n; ++i) s += occupancy_a.at(i + 1) * merged_control.at(n - i);
        out.probs[n] = s;
    }
    while (out.probs.size() > 1 && out.probs.back() == 0.0) out.probs.pop_back();
    out.truncation_mass = std::max(0.0, 1.0 - out.sum());
    return out;
}

}  // namespace taskload
