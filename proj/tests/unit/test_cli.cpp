#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "taskload/cli/commands.hpp"
#include "taskload/errors.hpp"

using namespace taskload;
using namespace taskload::cli;
using nlohmann::json;

namespace {

const std::string kData = TASKLOAD_TEST_DATA;

json minimal() { return json{{"schema_version", 1}}; }

std::string file_of(const CommandResult& r, const std::string& name, OutputFormat f = OutputFormat::csv) {
    for (const auto& [n, content] : render(r, f))
        if (n == name) return content;
    FAIL("missing output " << name);
    return {};
}

}  // namespace

TEST_CASE("defaults follow the published tables") {
    const Config c = parse_config(minimal());
    CHECK(c.scenario.kind == ScenarioKind::single_lane);
    CHECK(c.scenario.n_runs == 41702);
    REQUIRE(c.scenario.flows.size() == 1);
    CHECK(c.scenario.flows[0].intensity_per_hour == 60.0);
    CHECK(c.scenario.flows[0].tolerance == tolerance_standard("stringent").bounds);
    CHECK(c.scenario.horizon == 120.0);
    CHECK(c.scenario.grid.dt == 0.1);
    CHECK(c.scenario.aircraft.ou[0] == default_ou_params(Axis::lateral));
    CHECK(c.distributions[1] == default_fte_params(Axis::vertical));

    const Config m = parse_config(json{{"schema_version", 1}, {"mc", {{"kind", "multilane"}}}});
    REQUIRE(m.scenario.flows.size() == 4);
    CHECK(m.scenario.flows[3].tolerance == tolerance_standard("lax").bounds);
    CHECK(m.scenario.n_runs == 10426);

    const Config x = parse_config(json{{"schema_version", 1}, {"mc", {{"kind", "crossing"}}}, {"geometry", {{"alpha_deg", 30}}}});
    CHECK(x.scenario.n_runs == 5412);
    CHECK(x.scenario.flows[0].intensity_per_hour == 2.5);
}

TEST_CASE("resolved config round-trips") {
    for (ScenarioKind k : {ScenarioKind::single_lane, ScenarioKind::multilane, ScenarioKind::crossing}) {
        const json j = to_json(default_config(k));
        CHECK(to_json(parse_config(j)) == j);
        CHECK(config_hash(j) == config_hash(to_json(parse_config(j))));
    }
    CHECK(config_hash(json{{"a", 1}}) != config_hash(json{{"a", 2}}));
}

TEST_CASE("strict parsing") {
    CHECK_THROWS_AS(parse_config(json::object()), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"schema_version", 2}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"schema_version", 1}, {"extra", 1}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"schema_version", 1}, {"mc", {{"sead", 1}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"schema_version", 1}, {"mc", {{"runs", "ten"}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"schema_version", 1}, {"mc", {{"runs", -3}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"schema_version", 1}, {"mc", {{"kind", "ring"}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"schema_version", 1}, {"ou", {{"lateral", {{"kappa", -1}}}}}}), ConfigError);
    CHECK_THROWS_AS(
        parse_config(json{{"schema_version", 1},
                          {"flows", {{{"intensity_per_hour", 5}, {"standard", "lax"}, {"tolerance", {{"lat_nm", 0.3}}}}}}}),
        ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"schema_version", 1}, {"flows", {{{"standard", "unknown"}}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"schema_version", 1}, {"mc", {{"reset", 0.2}}}}), ConfigError);
}

TEST_CASE("flows by standard name, custom standards, partial tolerances") {
    const json j = {{"schema_version", 1},
                    {"standards", {{{"name", "tight"}, {"lat_nm", 0.05}, {"vert_ft", 10}, {"long_nm", 0.3}}}},
                    {"flows",
                     {{{"intensity_per_hour", 5}, {"standard", "tight"}},
                      {{"intensity_per_hour", 5}, {"tolerance", {{"lat_nm", 0.3}}}}}},
                    {"mc", {{"kind", "multilane"}, {"axes", {"lateral"}}}}};
    const Config c = parse_config(j);
    CHECK(c.scenario.flows[0].tolerance == ToleranceBounds{0.05, 10, 0.3});
    CHECK(c.scenario.flows[1].tolerance == ToleranceBounds{0.3, 20, 0.5});
    CHECK(c.scenario.axes_enabled == PerAxis<bool>{true, false, false});
}

TEST_CASE("csv reading diagnostics") {
    const CsvTable t = parse_csv("# note\nt_min,lat_nm\n0,1\n\n1,2\n", "x");
    CHECK(t.comments == std::vector<std::string>{"note"});
    CHECK(t.rows.size() == 2);
    CHECK(t.line_of(1) == 5);
    try {
        read_csv(kData + "/ragged.csv");
        FAIL("expected a DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("ragged.csv:3") != std::string::npos);
    }
    try {
        parse_cell("abc", "f.csv", 4, 2);
        FAIL("expected a DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("f.csv:4:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_csv("", "empty"), DataError);
}

TEST_CASE("numbers are written losslessly") {
    for (double v : {0.1, -0.028040853543420275, 1e-300, 12345.678, 0.0}) {
        const std::string s = format_double(v);
        CHECK(parse_cell(s, "x", 1, 1) == v);
    }
}

TEST_CASE("atomic write") {
    const auto dir = std::filesystem::temp_directory_path() / "taskload_cli_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "a.csv").string();
    write_atomic(path, "one\n");
    write_atomic(path, "two\n");
    CHECK(read_file(path) == "two\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    CHECK_THROWS_AS(write_atomic((dir / "missing" / "b.csv").string(), "x"), ConfigError);
}

TEST_CASE("generate") {
    json j = minimal();
    j["generate"] = {{"n", 0}};
    const CommandResult empty = run_command("generate", parse_config(j));
    const std::string text = numeric_payload(file_of(empty, "fte_lateral.csv"));
    CHECK(text == "t_min,lat_nm\n");

    j["generate"] = {{"n", 500}, {"axis", "vertical"}};
    const CommandResult a = run_command("generate", parse_config(j));
    const CommandResult b = run_command("generate", parse_config(j));
    CHECK(file_of(a, "fte_vertical.csv") == file_of(b, "fte_vertical.csv"));
    j["mc"] = {{"seed", 99}};
    const CommandResult c = run_command("generate", parse_config(j));
    CHECK(numeric_payload(file_of(a, "fte_vertical.csv")) != numeric_payload(file_of(c, "fte_vertical.csv")));
}

TEST_CASE("calibrate the affine fixture") {
    json j = minimal();
    j["calibrate"] = {{"input", kData + "/affine.csv"}, {"method", "both"}};
    const CommandResult r = run_command("calibrate", parse_config(j));
    const CsvTable t = parse_csv(file_of(r, "calibration.csv"));
    REQUIRE(t.rows.size() == 2);
    for (const auto& row : t.rows) {
        CHECK(std::stod(row[t.column("kappa")]) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
        CHECK(std::stod(row[t.column("mu")]) == doctest::Approx(0.2).epsilon(1e-9));
    }
    bool coincide = false;
    for (const auto& m : r.messages) coincide = coincide || m.find("(coincide)") != std::string::npos;
    CHECK(coincide);

    j["calibrate"]["input"] = kData + "/malformed.csv";
    try {
        run_command("calibrate", parse_config(j));
        FAIL("expected a DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("malformed.csv:4:2") != std::string::npos);
        CHECK(exit_code_for(e) == kExitData);
    }
}

TEST_CASE("generated data calibrates without mean memory") {
    const auto dir = std::filesystem::temp_directory_path() / "taskload_cli_test";
    std::filesystem::create_directories(dir);
    json j = minimal();
    j["generate"] = {{"n", 20000}};
    const CommandResult g = run_command("generate", parse_config(j));
    const std::string path = (dir / "fte.csv").string();
    write_atomic(path, file_of(g, "fte_lateral.csv"));
    j["calibrate"] = {{"input", path}};
    const CommandResult r = run_command("calibrate", parse_config(j));
    const CsvTable m = parse_csv(file_of(r, "moments.csv"));
    CHECK(std::stod(m.rows[0][m.column("mean")]) == doctest::Approx(-0.028).epsilon(0.1));
    // Independent draws: the lag-one slope is near zero, so mean reversion is
    // either absent or faster than the one-minute sampling can resolve.
    const CsvTable c = parse_csv(file_of(r, "calibration.csv"));
    const double a = std::stod(c.rows[0][c.column("a_hat")]);
    CHECK(std::abs(a) < 4.0 / std::sqrt(20000.0));
}

TEST_CASE("safe-zone table") {
    const CommandResult r = run_command("safe-zone", parse_config(minimal()));
    const CsvTable t = parse_csv(file_of(r, "safe_zone.csv"));
    REQUIRE(t.rows.size() == 3);
    CHECK(std::stod(t.rows[1][t.column("alpha_deg")]) == 90.0);
    CHECK(std::stod(t.rows[1][t.column("x1_nm")]) == doctest::Approx(3.7767).epsilon(1e-4));
}

TEST_CASE("replay reproduces numeric payloads") {
    json j = minimal();
    j["mc"] = {{"runs", 20}, {"horizon_min", 30}, {"seed", 5}};
    j["generate"] = {{"n", 100}};
    for (const char* cmd : {"generate", "simulate", "safe-zone"}) {
        const CommandResult r = run_command(cmd, parse_config(j));
        for (OutputFormat f : {OutputFormat::csv, OutputFormat::json})
            for (const auto& [name, content] : render(r, f)) {
                const Provenance p = read_provenance(content);
                CHECK(p.command == cmd);
                CHECK(p.seed == 5);
                CHECK(p.config_hash == config_hash(to_json(parse_config(j))));
                const CommandResult again = replay(content);
                bool found = false;
                for (const auto& [n2, c2] : render(again, f))
                    if (n2 == name) {
                        found = true;
                        CHECK(numeric_payload(c2) == numeric_payload(content));
                    }
                CHECK(found);
            }
    }
}

TEST_CASE("tampered provenance is rejected") {
    json j = minimal();
    j["generate"] = {{"n", 3}};
    std::string content = file_of(run_command("generate", parse_config(j)), "fte_lateral.csv");
    const auto pos = content.find("\"n\":3");
    REQUIRE(pos != std::string::npos);
    content.replace(pos, 5, "\"n\":4");
    CHECK_THROWS_AS(replay(content), DataError);
    CHECK_THROWS_AS(read_provenance("t_min,lat_nm\n0,1\n"), DataError);
}

TEST_CASE("compare from files") {
    const auto dir = std::filesystem::temp_directory_path() / "taskload_cli_test";
    std::filesystem::create_directories(dir);
    json j = minimal();
    j["mc"] = {{"runs", 30}, {"horizon_min", 30}, {"axes", {"lateral"}}};
    j["analytic"] = {{"oracle_paths", 5000}};
    const Config c = parse_config(j);
    const CommandResult sim = run_command("simulate", c);
    const std::string mc_path = (dir / "mc.json").string();
    write_atomic(mc_path, render(sim, OutputFormat::json).front().second);
    const std::string an_path = (dir / "analytic.csv").string();
    write_atomic(an_path, file_of(run_command("analytic", c), "analytic.csv"));

    j["compare"] = {{"analytic_file", an_path}, {"mc_file", mc_path}, {"threshold", 1.0}, {"series", {"lateral"}}};
    const CommandResult r = run_command("compare", parse_config(j));
    CHECK(r.exit_code == kExitOk);
    j["compare"]["threshold"] = 0.0;
    CHECK(run_command("compare", parse_config(j)).exit_code == kExitComparison);
    j["compare"]["series"] = {"nonexistent"};
    CHECK_THROWS_AS(run_command("compare", parse_config(j)), DataError);
}

TEST_CASE("exit code mapping") {
    CHECK(exit_code_for(ConfigError("x")) == kExitConfig);
    CHECK(exit_code_for(DataError("x")) == kExitData);
    CHECK(exit_code_for(NumericalError("x")) == kExitNumerical);
    CHECK(exit_code_for(ComparisonFailure("x")) == kExitComparison);
    CHECK(exit_code_for(std::invalid_argument("x")) == kExitConfig);
}
