#include <doctest.h>

#include <cmath>

#include "taskload/analytic.hpp"
#include "taskload/errors.hpp"
#include "taskload/mc_harness.hpp"

using namespace taskload;

namespace {

ScenarioConfig lane(double lambda, std::uint64_t runs) {
    ScenarioConfig c;
    FlowSpec f;
    f.intensity_per_hour = lambda;
    c.flows = {f};
    c.n_runs = runs;
    c.horizon = 30.0;
    return c;
}

double mean_of(const CountHistogram& h) {
    double s = 0.0;
    for (std::size_t n = 0; n < h.size(); ++n) s += double(n) * double(h.count(n));
    return s / double(h.total());
}

}  // namespace

TEST_CASE("zero intensity gives no taskload") {
    const McEstimate e = run_scenario(lane(0.0, 50));
    CHECK(e.pmf(series::total_3d).at(0) == 1.0);
    CHECK(e.pmf(series::lateral).at(0) == 1.0);
    CHECK(e.n_aircraft == 0);
}

TEST_CASE("identical configs give identical estimates") {
    const ScenarioConfig c = lane(10.0, 40);
    CHECK(run_scenario(c) == run_scenario(c));
    ScenarioConfig d = c;
    d.seed = 2;
    CHECK_FALSE(run_scenario(c) == run_scenario(d));
}

TEST_CASE("batches merge into the larger run exactly") {
    ScenarioConfig whole = lane(10.0, 60);
    ScenarioConfig a = whole, b = whole, c = whole;
    a.n_runs = 25;
    b.first_run = 25;
    b.n_runs = 15;
    c.first_run = 40;
    c.n_runs = 20;
    McEstimate ab = run_scenario(a);
    ab.merge(run_scenario(b));
    McEstimate abc = ab;
    abc.merge(run_scenario(c));
    McEstimate bc = run_scenario(b);
    bc.merge(run_scenario(c));
    McEstimate a_bc = run_scenario(a);
    a_bc.merge(bc);
    const McEstimate ref = run_scenario(whole);
    CHECK(abc == ref);
    CHECK(a_bc == ref);
}

TEST_CASE("thread count does not change results") {
    ScenarioConfig c = lane(10.0, 30);
    const McEstimate one = run_scenario(c);
    c.threads = 3;
    CHECK(run_scenario(c) == one);
}

TEST_CASE("a one-lane multilane run equals the single lane") {
    ScenarioConfig s = lane(20.0, 30);
    ScenarioConfig m = s;
    m.kind = ScenarioKind::multilane;
    const McEstimate a = run_scenario(s), b = run_scenario(m);
    const std::string p = series::lane_prefix(1);
    CHECK(a.at(series::lateral) == b.at(p + series::lateral));
    CHECK(a.at(series::total_3d) == b.at(p + series::total_3d));
}

TEST_CASE("lane prefixes are cumulative") {
    ScenarioConfig m = lane(20.0, 30);
    m.kind = ScenarioKind::multilane;
    FlowSpec lax = m.flows[0];
    lax.tolerance = tolerance_standard("lax").bounds;
    m.flows.push_back(lax);
    const McEstimate e = run_scenario(m);
    CHECK(mean_of(e.at(series::lane_prefix(2) + series::lateral)) >=
          mean_of(e.at(series::lane_prefix(1) + series::lateral)));
}

TEST_CASE("3-D count is the sum of the axes") {
    const McEstimate e = run_scenario(lane(20.0, 60));
    const double sum = mean_of(e.at(series::lateral)) + mean_of(e.at(series::vertical)) +
                       mean_of(e.at(series::longitudinal));
    CHECK(mean_of(e.at(series::total_3d)) == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("crossing split adds up") {
    ScenarioConfig c;
    c.kind = ScenarioKind::crossing;
    FlowSpec f;
    f.intensity_per_hour = 20.0;
    c.flows = {f, f};
    c.geometry = CrossingGeometry{};
    c.n_runs = 80;
    const McEstimate e = run_scenario(c);
    const double total = mean_of(e.at(series::total));
    CHECK(total ==
          doctest::Approx(mean_of(e.at(series::conflict)) + mean_of(e.at(series::control))).epsilon(1e-12));
    CHECK(e.series.count(series::zone_occupancy) == 1);
}

TEST_CASE("resolution floor and empty bins") {
    const McEstimate e = run_scenario(lane(10.0, 40));
    CHECK(e.resolution_floor() == doctest::Approx(1.0 / 40.0));
    for (const BinEstimate& b : e.bins(series::total_3d)) {
        CHECK(b.below_floor == (b.hits == 0));
        CHECK(b.ci_lo <= b.prob);
        CHECK(b.ci_hi >= b.prob);
    }
}

TEST_CASE("confidence intervals cover a known pmf") {
    const TaskloadPmf truth = poisson_pmf(2.0);
    int covered = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        RandomSource src(77, rep);
        McEstimate e;
        e.n_runs = 400;
        for (int i = 0; i < 400; ++i) e.series["x"].add(src.poisson(2.0));
        const auto bins = e.bins("x");
        if (bins.size() > 2 && bins[2].ci_lo <= truth.at(2) && truth.at(2) <= bins[2].ci_hi) ++covered;
    }
    CHECK(covered >= 90);
}

TEST_CASE("compare") {
    CountHistogram h;
    h.add(0, 10);
    const ComparisonReport same = compare(TaskloadPmf::point_mass(0, 120.0), h, 120.0, 0.02);
    CHECK(same.tv == 0.0);
    CHECK(same.pass);
    const ComparisonReport off = compare(TaskloadPmf::point_mass(1, 120.0), h, 120.0, 0.02);
    CHECK(off.tv == 1.0);
    CHECK_FALSE(off.pass);
    CHECK_THROWS(compare(TaskloadPmf::point_mass(0, 120.0), h, 60.0, 0.02));
    CHECK_THROWS(compare(TaskloadPmf::point_mass(0, 120.0), CountHistogram{}, 120.0, 0.02));
}

TEST_CASE("configuration errors") {
    ScenarioConfig c = lane(10.0, 10);
    c.aircraft.reset = 0.5;
    CHECK_THROWS_AS(run_scenario(c), ConfigError);
    c = lane(10.0, 10);
    c.horizon = 0.0;
    CHECK_THROWS_AS(run_scenario(c), ConfigError);
    c = lane(10.0, 10);
    c.kind = ScenarioKind::crossing;
    CHECK_THROWS_AS(run_scenario(c), ConfigError);
    c = lane(10.0, 10);
    c.axes_enabled = {false, false, false};
    CHECK_THROWS_AS(run_scenario(c), ConfigError);
}

TEST_CASE("analytic tables are keyed like the simulation") {
    ScenarioConfig c = lane(10.0, 10);
    DensityOracleOptions o;
    o.n_paths = 2000;
    const AnalyticResult a = analytic_taskload(c, o);
    for (const char* s : {series::lateral, series::vertical, series::longitudinal, series::total_3d}) {
        REQUIRE(a.tables.count(s) == 1);
        CHECK(a.tables.at(s).sum() + a.tables.at(s).truncation_mass == doctest::Approx(1.0).epsilon(1e-9));
    }
    // the per-aircraft stream depends only on its inputs
    const TaskloadPmf x = per_aircraft_taskload(Axis::lateral, default_ou_params(Axis::lateral), 0.1, 30.0, 0.0, {}, o, 1);
    const TaskloadPmf y = per_aircraft_taskload(Axis::lateral, default_ou_params(Axis::lateral), 0.1, 30.0, 0.0, {}, o, 1);
    CHECK(x.probs == y.probs);
}

TEST_CASE("crossing analytic tables") {
    ScenarioConfig c;
    c.kind = ScenarioKind::crossing;
    FlowSpec f;
    f.intensity_per_hour = 2.5;
    c.flows = {f, f};
    c.geometry = CrossingGeometry{};
    DensityOracleOptions o;
    o.n_paths = 2000;
    const AnalyticResult a = analytic_taskload(c, o);
    REQUIRE(a.geometry);
    CHECK(a.geometry->solved);
    for (const char* s : {series::zone_occupancy, series::conflict, series::control, series::total})
        CHECK(a.tables.count(s) == 1);
}
