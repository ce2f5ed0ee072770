#include "taskload/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "taskload/calibration.hpp"
#include "taskload/errors.hpp"

namespace taskload::cli {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

// Random stream of the generate command, distinct per axis.
constexpr std::uint64_t kGenerateStream = 0x6e6e7261746f72ULL;

CommandResult cmd_generate(const Config& cfg) {
    CommandResult r;
    const Axis axis = cfg.generate.axis;
    RandomSource src(cfg.scenario.seed, kGenerateStream + index(axis));
    const std::vector<double> xs = johnson_sample(cfg.distributions[index(axis)], src, cfg.generate.n);
    NamedTable t{"fte_" + std::string(axis_name(axis)), {"t_min", std::string(axis_column(axis))}, {}};
    t.rows.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        t.rows.push_back({fmt(static_cast<double>(i) * cfg.generate.dt), fmt(xs[i])});
    r.messages.push_back(std::to_string(xs.size()) + " " + std::string(axis_name(axis)) + " samples");
    r.tables.push_back(std::move(t));
    return r;
}

TimeSeries read_series(const std::string& path) {
    if (path.empty()) throw ConfigError("calibrate: no input file (calibrate.input or --in)");
    const CsvTable t = read_csv(path);
    std::optional<std::size_t> value_col;
    for (Axis a : kAllAxes)
        for (std::size_t i = 0; i < t.header.size(); ++i)
            if (t.header[i] == axis_column(a)) {
                if (value_col) throw DataError(path + ": more than one axis column");
                value_col = i;
            }
    if (!value_col) throw DataError(path + ": no axis column (lat_nm, vert_ft or long_nm)");
    std::optional<std::size_t> time_col;
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == "t_min") time_col = i;

    TimeSeries ts;
    std::vector<double> times;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        ts.values.push_back(parse_cell(t.rows[r][*value_col], path, t.line_of(r), *value_col + 1));
        if (time_col) times.push_back(parse_cell(t.rows[r][*time_col], path, t.line_of(r), *time_col + 1));
    }
    if (time_col && times.size() >= 2) {
        ts.dt = times[1] - times[0];
        if (!(ts.dt > 0.0)) throw DataError(path + ": t_min must increase");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (std::abs(times[i] - times[i - 1] - ts.dt) > 1e-6 * ts.dt)
                throw DataError(path + ":" + std::to_string(t.line_of(i)) + ": t_min is not uniformly spaced");
    }
    ts.validate();
    return ts;
}

std::vector<std::string> report_row(const CalibrationReport& rep) {
    auto opt = [&](auto get) { return rep.params ? fmt(get(*rep.params)) : std::string("NA"); };
    std::string flags;
    for (const auto& f : rep.flags) flags += (flags.empty() ? "" : ";") + f;
    return {rep.method == FitMethod::least_squares ? "ls" : "mle",
            opt([](const OuParams& p) { return p.kappa; }),
            opt([](const OuParams& p) { return p.mu; }),
            opt([](const OuParams& p) { return p.sigma; }),
            fmt(rep.a_hat),
            fmt(rep.b_hat),
            fmt(rep.sigma_eps_hat),
            fmt(rep.loglik),
            std::isfinite(rep.stationary_sd) ? fmt(rep.stationary_sd) : std::string("NA"),
            std::to_string(rep.iterations),
            flags.empty() ? std::string("none") : flags};
}

double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

CommandResult cmd_calibrate(const Config& cfg) {
    CommandResult r;
    const TimeSeries ts = read_series(cfg.calibrate.input);
    NamedTable t{"calibration",
                 {"method", "kappa", "mu", "sigma", "a_hat", "b_hat", "sigma_eps", "loglik", "stationary_sd",
                  "iterations", "flags"},
                 {}};
    std::optional<CalibrationReport> ls, mle;
    if (cfg.calibrate.method != CalibrateMethod::mle) ls = fit_least_squares(ts);
    if (cfg.calibrate.method != CalibrateMethod::ls) mle = fit_mle(ts);
    if (ls) t.rows.push_back(report_row(*ls));
    if (mle) t.rows.push_back(report_row(*mle));
    r.tables.push_back(std::move(t));

    const SampleMoments m = sample_moments(ts.values);
    r.tables.push_back({"moments",
                        {"n", "mean", "variance", "beta1", "beta2"},
                        {{std::to_string(ts.values.size()), fmt(m.moments.mu1), fmt(m.moments.mu2),
                          m.degenerate ? "NA" : fmt(m.moments.beta1), m.degenerate ? "NA" : fmt(m.moments.beta2)}}});

    if (ls && mle && ls->params && mle->params) {
        const double dk = rel_diff(ls->params->kappa, mle->params->kappa);
        const double dm = rel_diff(ls->params->mu, mle->params->mu);
        r.messages.push_back("ls vs mle relative difference: kappa " + fmt(dk) + ", mu " + fmt(dm) +
                             (std::max(dk, dm) <= 1e-6 ? " (coincide)" : " (differ)"));
    }
    for (const auto* rep : {ls ? &*ls : nullptr, mle ? &*mle : nullptr})
        if (rep)
            for (const auto& f : rep->flags)
                r.messages.push_back(std::string(rep->method == FitMethod::least_squares ? "ls" : "mle") + ": " + f);
    return r;
}

void pmf_rows(NamedTable& t, const std::string& name, const TaskloadPmf& p) {
    for (std::size_t n = 0; n < p.size(); ++n) t.rows.push_back({name, std::to_string(n), fmt(p.probs[n])});
    t.rows.push_back({name, "tail", fmt(p.truncation_mass)});
}

void geometry_messages(CommandResult& r, const CrossingGeometry& g) {
    r.messages.push_back("safe zone at " + fmt(g.alpha_deg) + " deg: half-length " + fmt(g.x1) + " NM, t_safe " +
                         fmt(g.t_safe) + " min");
}

CommandResult cmd_analytic(const Config& cfg) {
    CommandResult r;
    const AnalyticResult a = analytic_taskload(cfg.scenario, cfg.oracle);
    NamedTable t{"analytic", {"series", "n", "prob"}, {}};
    for (const auto& [name, p] : a.tables) pmf_rows(t, name, p);
    r.tables.push_back(std::move(t));
    if (a.geometry) geometry_messages(r, *a.geometry);
    for (const auto& [name, p] : a.tables) r.messages.push_back(name + ": mean " + fmt(p.mean()));
    return r;
}

CommandResult cmd_simulate(const Config& cfg) {
    CommandResult r;
    const McEstimate est = run_scenario(cfg.scenario);
    const std::string floor = "<" + fmt(est.resolution_floor());
    NamedTable t{"mc", {"series", "n", "count", "prob", "ci_lo", "ci_hi"}, {}};
    for (const auto& [name, h] : est.series)
        for (const BinEstimate& b : est.bins(name))
            t.rows.push_back({name, std::to_string(b.n), fmt(b.hits), b.below_floor ? floor : fmt(b.prob), fmt(b.ci_lo),
                              fmt(b.ci_hi)});
    r.tables.push_back(std::move(t));
    r.tables.push_back({"mc_summary",
                        {"runs", "aircraft", "horizon_min", "resolution_floor"},
                        {{fmt(est.n_runs), fmt(est.n_aircraft), fmt(est.horizon), fmt(est.resolution_floor())}}});
    r.messages.push_back(std::to_string(est.n_runs) + " runs, " + std::to_string(est.n_aircraft) + " aircraft");
    return r;
}

std::map<std::string, TaskloadPmf> pmfs_from_table(const CsvTable& t, const std::string& source) {
    const std::size_t cs = t.column("series", source), cn = t.column("n", source), cp = t.column("prob", source);
    std::map<std::string, TaskloadPmf> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        TaskloadPmf& p = out[row[cs]];
        const double v = parse_cell(row[cp], source, t.line_of(i), cp + 1);
        if (row[cn] == "tail") {
            p.truncation_mass = v;
            continue;
        }
        const double n = parse_cell(row[cn], source, t.line_of(i), cn + 1);
        if (n != static_cast<double>(p.probs.size()))
            throw DataError(source + ":" + std::to_string(t.line_of(i)) + ": bins must be consecutive from 0");
        p.probs.push_back(v);
    }
    return out;
}

std::map<std::string, CountHistogram> histograms_from_table(const CsvTable& t, const std::string& source) {
    const std::size_t cs = t.column("series", source), cn = t.column("n", source), cc = t.column("count", source);
    std::map<std::string, CountHistogram> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const double n = parse_cell(row[cn], source, t.line_of(i), cn + 1);
        const double c = parse_cell(row[cc], source, t.line_of(i), cc + 1);
        if (n < 0 || c < 0 || n != std::floor(n) || c != std::floor(c))
            throw DataError(source + ":" + std::to_string(t.line_of(i)) + ": n and count must be whole numbers");
        out[row[cs]].add(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(c));
    }
    return out;
}

CommandResult cmd_compare(const Config& cfg) {
    CommandResult r;
    std::map<std::string, TaskloadPmf> analytic;
    std::map<std::string, CountHistogram> mc;
    std::optional<double> mc_horizon;
    if (!cfg.compare.analytic_file.empty()) {
        analytic = pmfs_from_table(load_table(cfg.compare.analytic_file, "analytic"), cfg.compare.analytic_file);
    } else {
        analytic = analytic_taskload(cfg.scenario, cfg.oracle).tables;
    }
    if (!cfg.compare.mc_file.empty()) {
        mc = histograms_from_table(load_table(cfg.compare.mc_file, "mc"), cfg.compare.mc_file);
        for (auto& [name, p] : analytic) p.horizon.reset();
    } else {
        const McEstimate est = run_scenario(cfg.scenario);
        mc = est.series;
        mc_horizon = est.horizon;
    }

    std::vector<std::string> names = cfg.compare.series;
    if (names.empty())
        for (const auto& [name, p] : analytic)
            if (mc.count(name)) names.push_back(name);
    if (names.empty()) throw DataError("compare: no series present on both sides");

    NamedTable bins{"compare", {"series", "n", "analytic", "mc", "z"}, {}};
    NamedTable summary{"compare_summary", {"series", "tv", "threshold", "pass", "max_abs_z"}, {}};
    bool all_pass = true;
    for (const auto& name : names) {
        const auto ia = analytic.find(name);
        const auto im = mc.find(name);
        if (ia == analytic.end() || im == mc.end()) throw DataError("compare: series '" + name + "' missing");
        const ComparisonReport rep = compare(ia->second, im->second, mc_horizon, cfg.compare.threshold);
        const TaskloadPmf emp = im->second.to_pmf();
        const std::size_t len = std::max({ia->second.size(), emp.size(), rep.z_scores.size()});
        for (std::size_t n = 0; n < len; ++n)
            bins.rows.push_back({name, std::to_string(n), fmt(ia->second.at(n)), fmt(emp.at(n)),
                                 fmt(n < rep.z_scores.size() ? rep.z_scores[n] : 0.0)});
        summary.rows.push_back({name, fmt(rep.tv), fmt(rep.threshold), rep.pass ? "1" : "0", fmt(rep.max_abs_z)});
        r.messages.push_back(name + ": TV " + fmt(rep.tv) + (rep.pass ? " pass" : " FAIL"));
        all_pass = all_pass && rep.pass;
    }
    r.tables.push_back(std::move(bins));
    r.tables.push_back(std::move(summary));
    if (!all_pass) r.exit_code = kExitComparison;
    return r;
}

CommandResult cmd_safe_zone(const Config& cfg) {
    CommandResult r;
    NamedTable t{"safe_zone",
                 {"alpha_deg", "e1_nm", "e2_nm", "d_min_nm", "speed_kt", "root_x1_nm", "root_x2_nm", "x1_nm", "x2_nm",
                  "t_safe_min"},
                 {}};
    const CrossingGeometry base = cfg.scenario.geometry.value_or(CrossingGeometry{});
    for (double alpha : cfg.safe_zone.angles_deg) {
        CrossingGeometry g = base;
        g.alpha_deg = alpha;
        g.solved = false;
        g = solve_safe_zone(g);
        t.rows.push_back({fmt(g.alpha_deg), fmt(g.e1), fmt(g.e2), fmt(g.d_min), fmt(g.speed_kt), fmt(g.root_x1),
                          fmt(g.root_x2), fmt(g.x1), fmt(g.x2), fmt(g.t_safe)});
        geometry_messages(r, g);
    }
    r.tables.push_back(std::move(t));
    return r;
}

json cell_json(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (!s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(v)) {
        if (s.find_first_of(".eE") == std::string::npos && s.front() != '-') return json(std::stoull(s));
        return json(v);
    }
    return json(s);
}

std::string cell_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number()) return format_double(v.get<double>());
    throw DataError("table cell is neither text nor number");
}

json provenance_json(const Provenance& p) {
    return {{"tool", "taskload"},
            {"version", p.tool_version},
            {"command", p.command},
            {"seed", p.seed},
            {"config_hash", hex64(p.config_hash)},
            {"config", p.config}};
}

Provenance provenance_from_json(const json& j) {
    try {
        Provenance p;
        p.tool_version = j.at("version").get<std::string>();
        p.command = j.at("command").get<std::string>();
        p.seed = j.at("seed").get<std::uint64_t>();
        p.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
        p.config = j.at("config");
        return p;
    } catch (const json::exception& e) {
        throw DataError(std::string("provenance: ") + e.what());
    }
}

bool is_json(const std::string& content) {
    const auto pos = content.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && content[pos] == '{';
}

const std::set<std::string> kCommands{"generate", "calibrate", "analytic", "simulate", "compare", "safe-zone"};

}  // namespace

Provenance make_provenance(const std::string& command, const Config& cfg) {
    Provenance p;
    p.command = command;
    p.seed = cfg.scenario.seed;
    p.config = to_json(cfg);
    p.config_hash = config_hash(p.config);
    return p;
}

CommandResult run_command(const std::string& command, const Config& cfg) {
    CommandResult r;
    if (command == "generate")
        r = cmd_generate(cfg);
    else if (command == "calibrate")
        r = cmd_calibrate(cfg);
    else if (command == "analytic")
        r = cmd_analytic(cfg);
    else if (command == "simulate")
        r = cmd_simulate(cfg);
    else if (command == "compare")
        r = cmd_compare(cfg);
    else if (command == "safe-zone")
        r = cmd_safe_zone(cfg);
    else
        throw ConfigError("unknown command '" + command + "'");
    r.command = command;
    r.provenance = make_provenance(command, cfg);
    return r;
}

std::vector<std::pair<std::string, std::string>> render(const CommandResult& r, OutputFormat format) {
    std::vector<std::pair<std::string, std::string>> out;
    const Provenance& p = r.provenance;
    if (format == OutputFormat::csv) {
        for (const auto& t : r.tables) {
            CsvTable c;
            c.comments = {"taskload " + p.tool_version, "command: " + p.command, "seed: " + std::to_string(p.seed),
                          "config_hash: " + hex64(p.config_hash), "config: " + p.config.dump()};
            c.header = t.header;
            c.rows = t.rows;
            out.emplace_back(t.name + ".csv", format_csv(c));
        }
        return out;
    }
    json doc;
    doc["provenance"] = provenance_json(p);
    doc["tables"] = json::object();
    for (const auto& t : r.tables) {
        json rows = json::array();
        for (const auto& row : t.rows) {
            json jr = json::array();
            for (const auto& cell : row) jr.push_back(cell_json(cell));
            rows.push_back(std::move(jr));
        }
        doc["tables"][t.name] = {{"columns", t.header}, {"rows", std::move(rows)}};
    }
    out.emplace_back(r.command + ".json", doc.dump(1) + "\n");
    return out;
}

Provenance read_provenance(const std::string& content) {
    if (is_json(content)) {
        json doc;
        try {
            doc = json::parse(content);
        } catch (const json::parse_error& e) {
            throw DataError(std::string("provenance: ") + e.what());
        }
        if (!doc.contains("provenance")) throw DataError("provenance: no provenance member");
        return provenance_from_json(doc.at("provenance"));
    }
    const CsvTable t = parse_csv(content, "provenance");
    Provenance p;
    bool have_config = false, have_command = false;
    for (const auto& c : t.comments) {
        const auto colon = c.find(": ");
        if (c.rfind("taskload ", 0) == 0) {
            p.tool_version = c.substr(9);
        } else if (colon != std::string::npos) {
            const std::string key = c.substr(0, colon), val = c.substr(colon + 2);
            try {
                if (key == "command") {
                    p.command = val;
                    have_command = true;
                } else if (key == "seed") {
                    p.seed = std::stoull(val);
                } else if (key == "config_hash") {
                    p.config_hash = std::stoull(val, nullptr, 16);
                } else if (key == "config") {
                    p.config = json::parse(val);
                    have_config = true;
                }
            } catch (const std::exception& e) {
                throw DataError("provenance: bad '" + key + "' line: " + e.what());
            }
        }
    }
    if (!have_config || !have_command) throw DataError("provenance: block missing or incomplete");
    return p;
}

std::string numeric_payload(const std::string& content) {
    if (is_json(content)) {
        json doc = json::parse(content);
        doc.erase("provenance");
        return doc.dump();
    }
    std::istringstream in(content);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind('#', 0) != 0) out += line + "\n";
    return out;
}

CommandResult replay(const std::string& content) {
    const Provenance p = read_provenance(content);
    if (!kCommands.count(p.command)) throw DataError("provenance: unknown command '" + p.command + "'");
    if (config_hash(p.config) != p.config_hash) throw DataError("provenance: config hash mismatch");
    return run_command(p.command, parse_config(p.config));
}

CsvTable load_table(const std::string& path, const std::string& name) {
    const std::string content = read_file(path);
    if (!is_json(content)) return parse_csv(content, path);
    json doc;
    try {
        doc = json::parse(content);
    } catch (const json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
    if (!doc.contains("tables") || !doc["tables"].contains(name)) throw DataError(path + ": no table '" + name + "'");
    const json& t = doc["tables"][name];
    CsvTable out;
    try {
        for (const auto& h : t.at("columns")) out.header.push_back(h.get<std::string>());
        for (const auto& row : t.at("rows")) {
            std::vector<std::string> cells;
            for (const auto& v : row) cells.push_back(cell_text(v));
            if (cells.size() != out.header.size()) throw DataError(path + ": ragged row in table '" + name + "'");
            out.rows.push_back(std::move(cells));
        }
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    return out;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) return kExitConfig;
    if (dynamic_cast<const DataError*>(&e)) return kExitData;
    if (dynamic_cast<const ComparisonFailure*>(&e)) return kExitComparison;
    return kExitNumerical;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Air traffic controller taskload: OU aircraft deviations and Poisson flows"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir, format, replay_path, kind;
    std::optional<std::uint64_t> seed, runs;
    std::optional<double> dt;
    app.add_option("--replay", replay_path, "Re-run the command recorded in an output file");

    auto common = [&](CLI::App* s) {
        s->add_option("--config", config_path, "Config file (JSON)")->check(CLI::ExistingFile);
        s->add_option("--seed", seed, "Random seed");
        s->add_option("--out", out_dir, "Output directory");
        s->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };
    auto scenario = [&](CLI::App* s) {
        s->add_option("--runs", runs, "Monte Carlo runs");
        s->add_option("--dt", dt, "Time step (min)");
        s->add_option("--kind", kind, "single_lane, multilane or crossing")
            ->check(CLI::IsMember({"single_lane", "multilane", "crossing"}));
    };
    app.add_option("--out", out_dir, "Output directory (with --replay)");
    app.add_option("--format", format, "csv or json (with --replay)")->check(CLI::IsMember({"csv", "json"}));

    std::string axis, n_text, input, method, analytic_file, mc_file;
    std::optional<double> threshold;
    std::vector<double> angles;

    CLI::App* gen = app.add_subcommand("generate", "Johnson S_U FTE samples");
    common(gen);
    gen->add_option("--axis", axis, "lateral, vertical or longitudinal");
    gen->add_option("--n", n_text, "Number of samples");
    CLI::App* cal = app.add_subcommand("calibrate", "Fit OU parameters to a deviation series");
    common(cal);
    cal->add_option("--in", input, "Input CSV (t_min and one axis column)");
    cal->add_option("--method", method, "ls, mle or both")->check(CLI::IsMember({"ls", "mle", "both"}));
    CLI::App* ana = app.add_subcommand("analytic", "Analytic taskload PMFs");
    common(ana);
    scenario(ana);
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo taskload estimate");
    common(sim);
    scenario(sim);
    CLI::App* cmp = app.add_subcommand("compare", "Analytic vs Monte Carlo report");
    common(cmp);
    scenario(cmp);
    cmp->add_option("--analytic", analytic_file, "Analytic table file (default: compute)");
    cmp->add_option("--mc", mc_file, "Monte Carlo table file (default: simulate)");
    cmp->add_option("--threshold", threshold, "TV pass threshold");
    CLI::App* sz = app.add_subcommand("safe-zone", "Solve safe-zone bounds");
    common(sz);
    sz->add_option("--alpha", angles, "Crossing angles (deg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        CommandResult result;
        OutputFormat fmt_out = OutputFormat::csv;
        std::string dir;
        if (!replay_path.empty()) {
            if (!app.get_subcommands().empty()) throw ConfigError("--replay takes no subcommand");
            const std::string content = read_file(replay_path);
            result = replay(content);
            const Config cfg = parse_config(result.provenance.config);
            fmt_out = format.empty() ? cfg.output.format : (format == "json" ? OutputFormat::json : OutputFormat::csv);
            dir = out_dir.empty() ? cfg.output.dir : out_dir;
        } else {
            if (app.get_subcommands().empty()) throw ConfigError("a command is required (see --help)");
            CLI::App* sub = app.get_subcommands().front();
            const std::string command = sub->get_name();

            json j = json::object();
            if (!config_path.empty()) {
                try {
                    j = json::parse(read_file(config_path));
                } catch (const json::parse_error& e) {
                    throw ConfigError(config_path + ": " + e.what());
                } catch (const DataError& e) {
                    throw ConfigError(e.what());
                }
                if (!j.is_object()) throw ConfigError(config_path + ": expected an object");
            } else {
                j["schema_version"] = kSchemaVersion;
            }
            if (seed) j["mc"]["seed"] = *seed;
            if (runs) j["mc"]["runs"] = *runs;
            if (dt) j["mc"]["dt_min"] = *dt;
            if (!kind.empty()) {
                if (j.contains("mc") && j["mc"].contains("kind") && j["mc"]["kind"] != kind && j.contains("flows"))
                    throw ConfigError("--kind conflicts with the config's mc.kind");
                j["mc"]["kind"] = kind;
            }
            if (!out_dir.empty()) j["output"]["dir"] = out_dir;
            if (!format.empty()) j["output"]["format"] = format;
            if (!axis.empty()) j["generate"]["axis"] = axis;
            if (!n_text.empty()) {
                try {
                    std::size_t pos = 0;
                    const auto n = std::stoull(n_text, &pos);
                    if (pos != n_text.size() || n_text.front() == '-') throw std::invalid_argument("n");
                    j["generate"]["n"] = n;
                } catch (const std::exception&) {
                    throw ConfigError("--n: expected a non-negative integer");
                }
            }
            if (!input.empty()) j["calibrate"]["input"] = input;
            if (!method.empty()) j["calibrate"]["method"] = method;
            if (!analytic_file.empty()) j["compare"]["analytic_file"] = analytic_file;
            if (!mc_file.empty()) j["compare"]["mc_file"] = mc_file;
            if (threshold) j["compare"]["threshold"] = *threshold;
            if (!angles.empty()) j["safe_zone"]["angles_deg"] = angles;

            const Config cfg = parse_config(j);
            result = run_command(command, cfg);
            fmt_out = cfg.output.format;
            dir = cfg.output.dir;
        }

        std::filesystem::create_directories(dir);
        for (const auto& [name, content] : render(result, fmt_out)) {
            const std::string path = (std::filesystem::path(dir) / name).string();
            write_atomic(path, content);
            std::cout << "wrote " << path << "\n";
        }
        for (const auto& m : result.messages) std::cout << m << "\n";
        return result.exit_code;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace taskload::cli
