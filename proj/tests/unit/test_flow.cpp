#include <doctest.h>

#include <cmath>
#include <numbers>

#include "taskload/errors.hpp"
#include "taskload/flow.hpp"

using namespace taskload;

namespace {

CrossingGeometry fixed_zone(double t_safe) {
    CrossingGeometry g;
    g.solved = true;
    g.t_safe = t_safe;
    return g;
}

// Both distance equations at (x1, x2); zero on the safe-zone boundary.
std::pair<double, double> residuals(const CrossingGeometry& g, double x1, double x2) {
    const double a = g.alpha_deg * std::numbers::pi / 180.0, c = std::cos(a), s = std::sin(a);
    const double h1 = g.e1 / 2, h2 = g.e2 / 2;
    const double A = x1 + x2 * c, B = x2 * s - h1;
    const double r1 = (A - h2 * c) * (A - h2 * c) + (B + h2 * s) * (B + h2 * s) - g.d_min * g.d_min;
    const double r2 = (A - h2 * s) * (A - h2 * s) + (B + h2 * c) * (B + h2 * c) - g.d_min * g.d_min;
    return {r1, r2};
}

}  // namespace

TEST_CASE("unit conversions") {
    CHECK(knots_to_nm_per_minute(480.0) == 8.0);
    CHECK(per_hour_to_per_minute(60.0) == 1.0);
    FlowSpec f;
    f.intensity_per_hour = 60.0;
    CHECK(f.expected_occupancy() == 20.0);
}

TEST_CASE("tolerance standards") {
    CHECK(tolerance_standards().size() == 4);
    const ToleranceStandard s = tolerance_standard("severe");
    CHECK(s.bounds[index(Axis::lateral)] == 0.12);
    CHECK(s.bounds[index(Axis::vertical)] == 22.0);
    CHECK(s.bounds[index(Axis::longitudinal)] == 0.6);
    CHECK(tolerance_standard("lax").bounds[0] == 0.2);
    CHECK_THROWS_AS(tolerance_standard("loose"), ConfigError);
}

TEST_CASE("flow validation") {
    FlowSpec f;
    f.intensity_per_hour = -1.0;
    CHECK_THROWS(f.validate());
    f = FlowSpec{};
    f.t_cross = 0.0;
    CHECK_THROWS(f.validate());
}

TEST_CASE("single lane mixture edge cases") {
    FlowSpec f;
    f.intensity_per_hour = 60.0;
    const TaskloadPmf occ = poisson_occupancy(f);
    CHECK(occ.mean() == doctest::Approx(20.0).epsilon(1e-10));
    // one intervention per aircraft reproduces the occupancy law
    const TaskloadPmf one = single_lane_pmf(f, TaskloadPmf::point_mass(1, 120.0), 1e-12);
    CHECK(total_variation(one, poisson_pmf(20.0)) < 1e-9);
    CHECK(single_lane_pmf(f, TaskloadPmf::point_mass(0, 120.0)).at(0) == doctest::Approx(1.0));
    FlowSpec idle;
    CHECK(single_lane_pmf(idle, poisson_pmf(3.0, 1e-15, 120.0)).at(0) == doctest::Approx(1.0));
}

TEST_CASE("thinning: Bernoulli per-aircraft counts give a Poisson total") {
    FlowSpec f;
    f.intensity_per_hour = 30.0;  // occupancy 10
    const TaskloadPmf bern{{0.7, 0.3}, 0.0, 120.0};
    const TaskloadPmf p = single_lane_pmf(f, bern, 1e-12);
    CHECK(total_variation(p, poisson_pmf(3.0)) < 1e-9);
}

TEST_CASE("identical lanes pool into one flow") {
    FlowSpec a;
    a.intensity_per_hour = 7.5;
    FlowSpec both = a;
    both.intensity_per_hour = 15.0;
    const TaskloadPmf per{{0.6, 0.3, 0.1}, 0.0, 120.0};
    const TaskloadPmf two = multilane_pmf({a, a}, {per, per});
    const TaskloadPmf one = single_lane_pmf(both, per);
    CHECK(total_variation(two, one) <= 1e-9);

    FlowSpec b = a;
    b.tolerance = tolerance_standard("lax").bounds;
    const TaskloadPmf other{{0.9, 0.1}, 0.0, 120.0};
    const TaskloadPmf mixed = multilane_pmf({a, b}, {per, other});
    CHECK(total_variation(mixed, convolve_pmf(single_lane_pmf(a, per), single_lane_pmf(b, other))) < 1e-12);
    CHECK_THROWS(multilane_pmf({a, b}, {per}));
}

TEST_CASE("safe zone with zero extents at 90 degrees") {
    CrossingGeometry g;
    g.e1 = g.e2 = 0.0;
    const CrossingGeometry s = solve_safe_zone(g);
    CHECK(std::abs(s.x1 - 5.0 / std::sqrt(2.0)) < 1e-9);
    CHECK(std::abs(s.x2 - 5.0 / std::sqrt(2.0)) < 1e-9);
    CHECK(s.t_safe == doctest::Approx(2.0 * s.x1 / 8.0));
}

TEST_CASE("default safe zone roots satisfy both equations") {
    const CrossingGeometry s = solve_safe_zone(CrossingGeometry{});
    CHECK(s.root_x1 == doctest::Approx(3.7767).epsilon(1e-4));
    CHECK(s.root_x2 == doctest::Approx(-3.2767).epsilon(1e-4));
    const auto [r1, r2] = residuals(s, s.root_x1, s.root_x2);
    CHECK(std::abs(r1) < 1e-9);
    CHECK(std::abs(r2) < 1e-9);
    CHECK(s.x1 == s.x2);
    CHECK(s.solved);
    for (double alpha : {30.0, 60.0, 120.0, 150.0}) {
        CrossingGeometry g;
        g.alpha_deg = alpha;
        g.e1 = 1.0;
        g.e2 = 2.0;
        const CrossingGeometry t = solve_safe_zone(g);
        const auto [q1, q2] = residuals(t, t.root_x1, t.root_x2);
        CHECK(std::abs(q1) < 1e-8);
        CHECK(std::abs(q2) < 1e-8);
    }
}

TEST_CASE("safe zone input checks") {
    CrossingGeometry g;
    g.alpha_deg = 0.0;
    CHECK_THROWS_AS(solve_safe_zone(g), ConfigError);
    g = CrossingGeometry{};
    g.d_min = -1.0;
    CHECK_THROWS_AS(solve_safe_zone(g), ConfigError);
}

TEST_CASE("conflict occupancy") {
    const TaskloadPmf a = conflict_pmf(fixed_zone(1.0), 2.5, 2.5);
    CHECK(a.at(0) == doctest::Approx(std::exp(-1.0 / 12.0)).epsilon(1e-14));
    CHECK(a.at(0) == doctest::Approx(0.92004).epsilon(1e-5));
    CHECK(a.tail_at_least(2) == doctest::Approx(3.29e-3).epsilon(2e-3));
    CHECK_THROWS(conflict_pmf(CrossingGeometry{}, 2.5, 2.5));
}

TEST_CASE("crossing combination") {
    const TaskloadPmf a{{0.8, 0.15, 0.05}, 0.0, std::nullopt};
    const TaskloadPmf n{{0.9, 0.1}, 0.0, 120.0};
    const TaskloadPmf t = crossing_pmf(a, n);
    CHECK(t.at(0) == doctest::Approx(0.8 + 0.15 * 0.9));
    CHECK(t.at(1) == doctest::Approx(0.15 * 0.1 + 0.05 * 0.9));
    CHECK(t.at(2) == doctest::Approx(0.05 * 0.1));
    CHECK(t.sum() + t.truncation_mass == doctest::Approx(1.0));
}

TEST_CASE("conflict episodes over a horizon") {
    // Each arrival is a conflict when the previous one was less than t_safe earlier.
    const double l1 = 30.0, l2 = 30.0, ts = 1.0, h = 120.0;
    const TaskloadPmf p = conflict_count_pmf(fixed_zone(ts), l1, l2, h);
    const double rate = (l1 + l2) / 60.0;
    CHECK(p.mean() == doctest::Approx(rate * h * (1.0 - std::exp(-rate * ts))).epsilon(0.01));
    CHECK(p.sum() + p.truncation_mass == doctest::Approx(1.0).epsilon(1e-9));
    const TaskloadPmf quiet = conflict_count_pmf(fixed_zone(ts), 0.0, 0.0, h);
    CHECK(quiet.at(0) == doctest::Approx(1.0));
}
