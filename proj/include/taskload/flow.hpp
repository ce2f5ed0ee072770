#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taskload/axis.hpp"
#include "taskload/pmf.hpp"

namespace taskload {

/// Per-axis half-widths: lateral NM, vertical ft, longitudinal NM.
using ToleranceBounds = PerAxis<double>;

struct ToleranceStandard {
    std::string name;
    ToleranceBounds bounds{};
};

/// stringent, severe, intermediate, lax.
const std::vector<ToleranceStandard>& tolerance_standards();
/// Throws ConfigError for an unknown name.
ToleranceStandard tolerance_standard(std::string_view name);

struct FlowSpec {
    double intensity_per_hour = 0.0;
    double t_cross = 20.0;   // min in sector
    double speed_kt = 480.0;
    ToleranceBounds tolerance = {0.1, 20.0, 0.5};
    double lateral_extent = 1.0;  // NM

    void validate() const;
    double expected_occupancy() const { return per_hour_to_per_minute(intensity_per_hour) * t_cross; }
};

/// Aircraft present in the sector: Poisson(lambda * t_cross).
TaskloadPmf poisson_occupancy(const FlowSpec& flow, double eps = 1e-15);

inline constexpr double kMixtureEps = 1e-8;

/// Poisson mixture of convolution powers of the per-aircraft PMF; the
/// occupancy sum stops once the remaining occupancy mass is below eps and
/// that remainder joins the truncation mass.
TaskloadPmf single_lane_pmf(const FlowSpec& flow, const TaskloadPmf& per_aircraft, double eps = kMixtureEps);

/// Independent lanes. Lanes sharing tolerance, residency and per-aircraft
/// PMF are pooled into one Poisson flow; the rest are convolved.
TaskloadPmf multilane_pmf(const std::vector<FlowSpec>& flows, const std::vector<TaskloadPmf>& per_aircraft,
                          double eps = kMixtureEps);

struct CrossingGeometry {
    double alpha_deg = 90.0;
    double e1 = 1.0;  // NM
    double e2 = 1.0;  // NM
    double d_min = 5.0;  // NM
    double speed_kt = 480.0;

    // Filled by solve_safe_zone.
    bool solved = false;
    double root_x1 = 0.0;  // signed root of the boundary system
    double root_x2 = 0.0;
    double x1 = 0.0;  // equalised half-lengths, NM
    double x2 = 0.0;
    double t_safe = 0.0;  // min

    void validate() const;
};

/// Solves the two distance equations for the safe-zone boundaries, keeps the
/// real root with the smallest larger half-length |x|, equalises both
/// half-lengths to that value and sets t_safe = 2 x / speed.
/// Throws NumericalError when no real root exists.
CrossingGeometry solve_safe_zone(CrossingGeometry g);

/// Aircraft simultaneously inside the safe zone: Poisson((lambda1 + lambda2) t_safe).
TaskloadPmf conflict_pmf(const CrossingGeometry& g, double lambda1_per_hour, double lambda2_per_hour,
                         double eps = 1e-15);

/// Conflicts over a horizon under the episode convention: an aircraft entering
/// while the zone is occupied is one conflict, and occupancy extends to
/// t_safe after the latest entry. Computed by a discrete-time recursion on the
/// remaining occupied time, started from the stationary state.
TaskloadPmf conflict_count_pmf(const CrossingGeometry& g, double lambda1_per_hour, double lambda2_per_hour,
                               double horizon, std::optional<double> step = std::nullopt, std::size_t n_max = 256);

/// Total crossing taskload from the occupancy PMF of A and the merged-flow
/// control PMF:
///   P[0]     = P[A=0] + P[A=1] P[N=0]
///   P[n >= 1] = sum_{i=0..n} P[A=i+1] P[N=n-i]
TaskloadPmf crossing_pmf(const TaskloadPmf& occupancy_a, const TaskloadPmf& merged_control);

}  // namespace taskload
