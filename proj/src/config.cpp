#include "adaptopt/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include <json.hpp>

#include "presets_embedded.hpp"
#include "strcat.hpp"

namespace adaptopt {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ParseError(cat(field.empty() ? "/" : field, ": ", message), 0, field);
}

const json& object_at(const json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object");
    return j;
}

void check_keys(const json& obj, const std::string& field, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(cat(field, "/", key), cat("unknown key \"", key, "\""));
        }
    }
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& field) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    if (j.is_number_float()) {
        const double d = j.get<double>();
        if (d >= 0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    fail(field, "expected a nonnegative integer");
}

std::string string(const json& j, const std::string& field) {
    if (!j.is_string()) fail(field, "expected a string");
    return j.get<std::string>();
}

bool boolean(const json& j, const std::string& field) {
    if (!j.is_boolean()) fail(field, "expected true or false");
    return j.get<bool>();
}

const json& array(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array");
    return j;
}

std::vector<Edge> edge_list(const json& j, const std::string& field) {
    std::vector<Edge> edges;
    const auto& arr = array(j, field);
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string f = cat(field, "/", k);
        const auto& e = array(arr[k], f);
        if (e.size() != 3) fail(f, "edge must be [i, j, weight]");
        edges.push_back({static_cast<std::size_t>(unsigned_integer(e[0], f + "/0")),
                         static_cast<std::size_t>(unsigned_integer(e[1], f + "/1")), number(e[2], f + "/2")});
    }
    return edges;
}

std::vector<std::vector<double>> matrix_rows(const json& j, const std::string& field) {
    std::vector<std::vector<double>> rows;
    const auto& arr = array(j, field);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string f = cat(field, "/", i);
        std::vector<double> row;
        for (std::size_t k = 0; k < array(arr[i], f).size(); ++k) row.push_back(number(arr[i][k], cat(f, "/", k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ExperimentConfig from_json(const json& doc) {
    object_at(doc, "");
    check_keys(doc, "", {"preset", "mode", "dimension", "objectives", "schedule", "protocol", "integrator", "dt",
                         "t_end", "sample_every", "seed", "initial", "checks", "output"});
    ExperimentConfig cfg;
    if (doc.contains("preset")) cfg.preset = string(doc["preset"], "/preset");

    if (doc.contains("mode")) {
        const auto m = string(doc["mode"], "/mode");
        if (m == "single") cfg.mode = Mode::Single;
        else if (m == "double") cfg.mode = Mode::Double;
        else fail("/mode", cat("expected \"single\" or \"double\", got \"", m, "\""));
    }
    if (doc.contains("dimension")) cfg.dimension = unsigned_integer(doc["dimension"], "/dimension");

    if (!doc.contains("objectives")) fail("/objectives", "missing");
    const auto& objs = array(doc["objectives"], "/objectives");
    for (std::size_t i = 0; i < objs.size(); ++i) {
        const std::string f = cat("/objectives/", i);
        std::vector<Term> terms;
        const auto& arr = array(objs[i], f);
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string tf = cat(f, "/", k);
            const auto& t = array(arr[k], tf);
            if (t.size() != 4) fail(tf, "term must be [coefficient, coordinate, shift, power]");
            const double power = number(t[3], tf + "/3");
            if (power != std::floor(power) || std::abs(power) > 1000) fail(tf + "/3", "power must be an integer");
            terms.push_back({number(t[0], tf + "/0"), static_cast<std::size_t>(unsigned_integer(t[1], tf + "/1")),
                             number(t[2], tf + "/2"), static_cast<int>(power)});
        }
        cfg.objectives.push_back(std::move(terms));
    }

    if (!doc.contains("schedule")) fail("/schedule", "missing");
    {
        const auto& s = object_at(doc["schedule"], "/schedule");
        if (s.contains("segments")) {
            check_keys(s, "/schedule", {"segments", "dwell"});
            ExplicitSchedule sched;
            const auto& segs = array(s["segments"], "/schedule/segments");
            for (std::size_t k = 0; k < segs.size(); ++k) {
                const std::string f = cat("/schedule/segments/", k);
                check_keys(object_at(segs[k], f), f, {"start", "edges"});
                if (!segs[k].contains("start") || !segs[k].contains("edges")) fail(f, "segment needs start and edges");
                sched.segments.push_back({number(segs[k]["start"], f + "/start"), edge_list(segs[k]["edges"], f + "/edges")});
            }
            if (s.contains("dwell")) sched.dwell = number(s["dwell"], "/schedule/dwell");
            cfg.schedule = std::move(sched);
        } else {
            check_keys(s, "/schedule", {"mode", "base", "dwell", "seed"});
            if (!s.contains("mode")) fail("/schedule", "needs either \"segments\" or \"mode\"");
            const auto mode = string(s["mode"], "/schedule/mode");
            if (mode != "random_connected_subgraphs") {
                fail("/schedule/mode", cat("unknown schedule mode \"", mode, "\""));
            }
            RandomSubgraphSchedule sched;
            if (!s.contains("base")) fail("/schedule/base", "missing");
            sched.base = edge_list(s["base"], "/schedule/base");
            if (s.contains("dwell")) sched.dwell = number(s["dwell"], "/schedule/dwell");
            if (s.contains("seed")) sched.seed = unsigned_integer(s["seed"], "/schedule/seed");
            cfg.schedule = std::move(sched);
        }
    }

    if (doc.contains("protocol")) {
        const auto& p = object_at(doc["protocol"], "/protocol");
        check_keys(p, "/protocol", {"p", "eps_norm", "eps_sign", "gain_argument"});
        if (p.contains("p")) cfg.protocol.p = number(p["p"], "/protocol/p");
        if (p.contains("eps_norm")) cfg.protocol.eps_norm = number(p["eps_norm"], "/protocol/eps_norm");
        if (p.contains("eps_sign")) cfg.protocol.eps_sign = number(p["eps_sign"], "/protocol/eps_sign");
        if (p.contains("gain_argument")) {
            const auto g = string(p["gain_argument"], "/protocol/gain_argument");
            if (g == "position") cfg.protocol.gain_argument = GainArgument::Position;
            else if (g == "vbar") cfg.protocol.gain_argument = GainArgument::Vbar;
            else fail("/protocol/gain_argument", cat("expected \"position\" or \"vbar\", got \"", g, "\""));
        }
    }
    cfg.protocol.mode = cfg.mode;

    if (doc.contains("integrator")) {
        const auto name = string(doc["integrator"], "/integrator");
        if (name == "euler") cfg.integrator = Integrator::Euler;
        else if (name == "imex") cfg.integrator = Integrator::Imex;
        else fail("/integrator", cat("expected \"euler\" or \"imex\", got \"", name, "\""));
    }
    if (doc.contains("dt")) cfg.dt = number(doc["dt"], "/dt");
    if (doc.contains("t_end")) cfg.t_end = number(doc["t_end"], "/t_end");
    if (doc.contains("sample_every")) cfg.sample_every = unsigned_integer(doc["sample_every"], "/sample_every");
    if (doc.contains("seed")) cfg.seed = unsigned_integer(doc["seed"], "/seed");

    if (doc.contains("initial")) {
        const auto& ini = object_at(doc["initial"], "/initial");
        check_keys(ini, "/initial", {"box", "seed", "random_velocity", "x", "v"});
        if (ini.contains("box")) cfg.initial.box = number(ini["box"], "/initial/box");
        if (ini.contains("seed")) cfg.initial.seed = unsigned_integer(ini["seed"], "/initial/seed");
        if (ini.contains("random_velocity")) {
            cfg.initial.random_velocity = boolean(ini["random_velocity"], "/initial/random_velocity");
        }
        if (ini.contains("x")) cfg.initial.x = matrix_rows(ini["x"], "/initial/x");
        if (ini.contains("v")) cfg.initial.v = matrix_rows(ini["v"], "/initial/v");
    }

    if (doc.contains("checks")) {
        const auto& c = object_at(doc["checks"], "/checks");
        check_keys(c, "/checks", {"optimum_tol", "consensus_threshold", "speed_tol", "plateau_tol", "dissipation_tol"});
        if (c.contains("optimum_tol")) cfg.checks.optimum_tol = number(c["optimum_tol"], "/checks/optimum_tol");
        if (c.contains("consensus_threshold")) {
            cfg.checks.consensus_threshold = number(c["consensus_threshold"], "/checks/consensus_threshold");
        }
        if (c.contains("speed_tol")) cfg.checks.speed_tol = number(c["speed_tol"], "/checks/speed_tol");
        if (c.contains("plateau_tol")) cfg.checks.plateau_tol = number(c["plateau_tol"], "/checks/plateau_tol");
        if (c.contains("dissipation_tol")) {
            cfg.checks.dissipation_tol = number(c["dissipation_tol"], "/checks/dissipation_tol");
        }
    }

    if (doc.contains("output")) {
        const auto& o = object_at(doc["output"], "/output");
        check_keys(o, "/output", {"dir", "plots"});
        if (o.contains("dir")) cfg.out_dir = string(o["dir"], "/output/dir");
        if (o.contains("plots")) cfg.plots = boolean(o["plots"], "/output/plots");
    }
    return cfg;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

json edges_json(const std::vector<Edge>& edges) {
    json arr = json::array();
    for (const auto& e : edges) arr.push_back({e.i, e.j, e.weight});
    return arr;
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto m = static_cast<Eigen::Index>(rows.empty() ? 0 : rows.front().size());
    Eigen::MatrixXd out(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < m; ++k) out(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    return out;
}

void check_edges(const std::vector<Edge>& edges, std::size_t n, const std::string& where,
                 std::vector<std::string>& out) {
    try {
        (void)Topology::from_edges(n, edges);
    } catch (const GraphError& e) {
        out.push_back(where + ": " + e.what());
    }
}

}  // namespace

std::vector<std::string> ExperimentConfig::problems() const {
    std::vector<std::string> out;
    const std::size_t n = agents();
    if (n == 0) out.push_back("objectives: at least one agent is required");
    if (dimension == 0) out.push_back("dimension must be at least 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) out.push_back(cat("dt must be positive, got ", dt));
    if (!(t_end >= dt)) out.push_back(cat("t_end (", t_end, ") must be at least dt (", dt, ")"));
    if (sample_every == 0) out.push_back("sample_every must be at least 1");
    for (auto& p : protocol.problems()) out.push_back("protocol: " + p);

    for (std::size_t i = 0; i < n && dimension > 0; ++i) {
        try {
            const ObjectiveSpec f(dimension, objectives[i]);
            (void)local_minimizer_set_bound(f);
        } catch (const std::exception& e) {
            out.push_back(cat("objectives[", i, "]: ", e.what()));
        }
    }

    if (const auto* s = std::get_if<ExplicitSchedule>(&schedule)) {
        if (s->segments.empty()) out.push_back("schedule: no segments");
        for (std::size_t k = 0; k < s->segments.size(); ++k) {
            check_edges(s->segments[k].edges, n, cat("schedule segment ", k), out);
        }
        try {
            TopologySchedule built;
            built.dwell_min = s->dwell;
            for (const auto& seg : s->segments) built.segments.push_back({seg.start, Topology::from_edges(n, seg.edges)});
            for (const auto& v : validate_schedule(built)) {
                if (v.kind != ViolationKind::Empty) out.push_back("schedule: " + v.message);
            }
        } catch (const GraphError&) {
            // Already reported by check_edges.
        }
        if (s->segments.size() > 1 && !(s->dwell > 0.0)) out.push_back("schedule: dwell must be positive");
        if (s->segments.size() > 1 && dt > s->dwell / 10.0) {
            out.push_back(cat("dt (", dt, ") exceeds schedule dwell / 10 (", s->dwell / 10.0, ")"));
        }
    } else {
        const auto& r = std::get<RandomSubgraphSchedule>(schedule);
        check_edges(r.base, n, "schedule base", out);
        if (!(r.dwell > 0.0)) out.push_back(cat("schedule: dwell must be positive, got ", r.dwell));
        else if (dt > r.dwell / 10.0) out.push_back(cat("dt (", dt, ") exceeds schedule dwell / 10 (", r.dwell / 10.0, ")"));
        try {
            if (!is_connected(Topology::from_edges(n, r.base))) out.push_back("schedule: base graph is not connected");
        } catch (const GraphError&) {
        }
    }

    if (!(initial.box >= 0.0)) out.push_back("initial.box must be nonnegative");
    auto check_rows = [&](const auto& rows, const char* name) {
        if (!rows) return;
        if (rows->size() != n) out.push_back(cat("initial.", name, " has ", rows->size(), " rows, expected ", n));
        for (const auto& r : *rows) {
            if (r.size() != dimension) {
                out.push_back(cat("initial.", name, " rows must have ", dimension, " entries"));
                break;
            }
        }
    };
    check_rows(initial.x, "x");
    check_rows(initial.v, "v");
    if (initial.v && mode == Mode::Single) out.push_back("initial.v is only meaningful in double mode");

    if (!(checks.optimum_tol > 0.0)) out.push_back("checks.optimum_tol must be positive");
    if (checks.consensus_threshold && !(*checks.consensus_threshold > 0.0)) {
        out.push_back("checks.consensus_threshold must be positive");
    }
    if (!(checks.speed_tol > 0.0)) out.push_back("checks.speed_tol must be positive");
    if (!(checks.plateau_tol > 0.0)) out.push_back("checks.plateau_tol must be positive");
    if (!(checks.dissipation_tol >= 0.0)) out.push_back("checks.dissipation_tol must be nonnegative");
    return out;
}

SimConfig ExperimentConfig::to_sim_config() const {
    if (auto p = problems(); !p.empty()) throw ConfigError(std::move(p));
    SimConfig sim;
    sim.dt = dt;
    sim.t_end = t_end;
    sim.sample_every = sample_every;
    sim.integrator = integrator;
    sim.params = protocol;
    sim.params.mode = mode;

    std::vector<ObjectiveSpec> members;
    for (const auto& terms : objectives) members.emplace_back(dimension, terms);
    sim.team = TeamObjective(std::move(members));

    const std::size_t n = agents();
    if (const auto* s = std::get_if<ExplicitSchedule>(&schedule)) {
        sim.schedule.dwell_min = s->dwell;
        for (const auto& seg : s->segments) sim.schedule.segments.push_back({seg.start, Topology::from_edges(n, seg.edges)});
    } else {
        const auto& r = std::get<RandomSubgraphSchedule>(schedule);
        sim.schedule = random_connected_schedule(Topology::from_edges(n, r.base), r.dwell, r.seed.value_or(seed + 1), t_end);
    }

    sim.initial.box_half_width = initial.box;
    sim.initial.box_seed = initial.seed.value_or(seed);
    sim.initial.random_velocity = initial.random_velocity;
    if (initial.x) sim.initial.x = to_matrix(*initial.x);
    if (initial.v) sim.initial.v = to_matrix(*initial.v);
    return sim;
}

ExperimentConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError(cat("line ", line, ": ", e.what()), line, "");
    }
    if (!doc.is_object()) fail("", "expected a JSON object at the top level");

    std::string preset;
    if (doc.contains("preset")) {
        preset = string(doc["preset"], "/preset");
        json base;
        try {
            base = json::parse(preset_document(preset));
        } catch (const std::out_of_range&) {
            fail("/preset", cat("unknown preset \"", preset, "\""));
        }
        base.merge_patch(doc);
        doc = std::move(base);
    }
    ExperimentConfig cfg = from_json(doc);
    cfg.preset = preset;
    if (auto p = cfg.problems(); !p.empty()) throw ConfigError(std::move(p));
    return cfg;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& p : embedded_presets) names.emplace_back(p.name);
    return names;
}

std::string preset_document(std::string_view name) {
    for (const auto& p : embedded_presets) {
        if (p.name == name) return std::string(p.document);
    }
    throw std::out_of_range(cat("unknown preset \"", name, "\""));
}

ExperimentConfig load_preset(std::string_view name) {
    return parse_config(json{{"preset", std::string(name)}}.dump());
}

std::string to_json(const ExperimentConfig& cfg) {
    json doc;
    doc["mode"] = to_string(cfg.mode);
    doc["dimension"] = cfg.dimension;
    json objs = json::array();
    for (const auto& terms : cfg.objectives) {
        json arr = json::array();
        for (const auto& t : terms) arr.push_back({t.coefficient, t.coordinate, t.shift, t.power});
        objs.push_back(arr);
    }
    doc["objectives"] = objs;
    if (const auto* s = std::get_if<ExplicitSchedule>(&cfg.schedule)) {
        json segs = json::array();
        for (const auto& seg : s->segments) segs.push_back({{"start", seg.start}, {"edges", edges_json(seg.edges)}});
        doc["schedule"] = {{"segments", segs}, {"dwell", s->dwell}};
    } else {
        const auto& r = std::get<RandomSubgraphSchedule>(cfg.schedule);
        doc["schedule"] = {{"mode", "random_connected_subgraphs"}, {"base", edges_json(r.base)}, {"dwell", r.dwell}};
        if (r.seed) doc["schedule"]["seed"] = *r.seed;
    }
    doc["protocol"] = {{"p", cfg.protocol.p},
                       {"eps_norm", cfg.protocol.eps_norm},
                       {"eps_sign", cfg.protocol.eps_sign},
                       {"gain_argument", to_string(cfg.protocol.gain_argument)}};
    doc["integrator"] = to_string(cfg.integrator);
    doc["dt"] = cfg.dt;
    doc["t_end"] = cfg.t_end;
    doc["sample_every"] = cfg.sample_every;
    doc["seed"] = cfg.seed;
    json ini = {{"box", cfg.initial.box}, {"random_velocity", cfg.initial.random_velocity}};
    if (cfg.initial.seed) ini["seed"] = *cfg.initial.seed;
    if (cfg.initial.x) ini["x"] = *cfg.initial.x;
    if (cfg.initial.v) ini["v"] = *cfg.initial.v;
    doc["initial"] = ini;
    json checks = {{"optimum_tol", cfg.checks.optimum_tol},
                   {"speed_tol", cfg.checks.speed_tol},
                   {"plateau_tol", cfg.checks.plateau_tol},
                   {"dissipation_tol", cfg.checks.dissipation_tol}};
    if (cfg.checks.consensus_threshold) checks["consensus_threshold"] = *cfg.checks.consensus_threshold;
    doc["checks"] = checks;
    doc["output"] = {{"dir", cfg.out_dir.string()}, {"plots", cfg.plots}};
    return doc.dump(2);
}

void set_parameter(ExperimentConfig& cfg, std::string_view key, double value) {
    if (key == "seed") {
        if (value < 0 || value != std::floor(value)) throw ConfigError({cat("seed must be a nonnegative integer, got ", value)});
        cfg.seed = static_cast<std::uint64_t>(value);
    } else if (key == "dt") {
        cfg.dt = value;
    } else if (key == "t_end") {
        cfg.t_end = value;
    } else if (key == "p") {
        cfg.protocol.p = value;
    } else if (key == "eps_norm") {
        cfg.protocol.eps_norm = value;
    } else if (key == "eps_sign") {
        cfg.protocol.eps_sign = value;
    } else if (key == "sample_every") {
        if (value < 1 || value != std::floor(value)) throw ConfigError({cat("sample_every must be a positive integer, got ", value)});
        cfg.sample_every = static_cast<std::size_t>(value);
    } else if (key == "dwell") {
        std::visit([&](auto& s) { s.dwell = value; }, cfg.schedule);
    } else if (key == "box") {
        cfg.initial.box = value;
    } else {
        throw ConfigError({cat("unknown parameter \"", key,
                               "\" (expected seed, dt, t_end, p, eps_norm, eps_sign, sample_every, dwell or box)")});
    }
}

}  // namespace adaptopt
