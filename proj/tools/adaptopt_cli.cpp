// Command-line runner for adaptive distributed optimization experiments.
//
//   adaptopt run <config.json> [--out DIR] [--seed N] [--dt S] [--t-end S] [--no-plots]
//   adaptopt run --preset benchmark_single [...] [--sweep seed=1,2,3]
//   adaptopt presets [--show NAME]
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 config error, 3 runtime error.

#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adaptopt/config.hpp"
#include "adaptopt/experiment.hpp"

namespace {

using namespace adaptopt;

constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

struct Sweep {
    std::string key;
    std::vector<double> values;
};

std::string shortest(double v) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError({"cannot parse " + what + " value \"" + s + "\""});
    return v;
}

/// key=v1,v2,... or key=start:stop:step (inclusive of stop, up to rounding).
Sweep parse_sweep(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError({"--sweep expects key=values, got \"" + spec + "\""});
    Sweep s{spec.substr(0, eq), {}};
    const std::string range = spec.substr(eq + 1);
    if (range.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(range);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ConfigError({"--sweep range must be start:stop:step"});
        const double start = parse_double(parts[0], "sweep");
        const double stop = parse_double(parts[1], "sweep");
        const double step = parse_double(parts[2], "sweep");
        if (!(step > 0.0) || stop < start) throw ConfigError({"--sweep range needs step > 0 and stop >= start"});
        const auto count = static_cast<std::size_t>((stop - start) / step + 1e-9) + 1;
        if (count > 10000) throw ConfigError({"--sweep range has too many values"});
        for (std::size_t k = 0; k < count; ++k) s.values.push_back(start + static_cast<double>(k) * step);
    } else {
        std::stringstream ss(range);
        for (std::string p; std::getline(ss, p, ',');) s.values.push_back(parse_double(p, "sweep"));
    }
    if (s.values.empty()) throw ConfigError({"--sweep has no values"});
    return s;
}

int report_error(const std::exception& e) {
    if (const auto* c = dynamic_cast<const ConfigError*>(&e)) {
        std::cerr << "config error:\n";
        for (const auto& p : c->problems) std::cerr << "  - " << p << "\n";
        return exit_config;
    }
    if (dynamic_cast<const ParseError*>(&e)) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    std::cerr << "runtime error: " << e.what() << "\n";
    return exit_runtime;
}

struct Outcome {
    int code = 0;
    std::string text;
};

Outcome run_one(const ExperimentConfig& cfg) {
    Outcome out;
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const auto result = run_experiment(cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream os;
        os << format_summary(result.summary);
        os << "wall time               " << secs << " s\n";
        os << "output                  " << cfg.out_dir.string() << "\n";
        out.text = os.str();
        out.code = result.summary.exit_code();
    } catch (const std::exception& e) {
        std::ostringstream err;
        std::streambuf* old = std::cerr.rdbuf(err.rdbuf());
        out.code = report_error(e);
        std::cerr.rdbuf(old);
        out.text = err.str();
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError({"cannot read config file " + path});
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive distributed optimization over switching networks"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run an experiment from a config file or preset");
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> t_end;
    bool no_plots = false;
    std::string sweep_spec;
    run_cmd->add_option("config", config_path, "JSON experiment config");
    run_cmd->add_option("--preset", preset, "Built-in preset name");
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--seed", seed, "Master seed (initial states, random schedule)");
    run_cmd->add_option("--dt", dt, "Integration step in seconds");
    run_cmd->add_option("--t-end", t_end, "Run horizon in seconds");
    run_cmd->add_flag("--no-plots", no_plots, "Skip SVG output");
    run_cmd->add_option("--sweep", sweep_spec, "Parameter sweep, key=v1,v2,... or key=start:stop:step");

    auto* presets_cmd = app.add_subcommand("presets", "List built-in presets");
    std::string show;
    presets_cmd->add_option("--show", show, "Print the JSON document of one preset");

    CLI11_PARSE(app, argc, argv);

    if (presets_cmd->parsed()) {
        if (!show.empty()) {
            try {
                std::cout << preset_document(show);
            } catch (const std::exception& e) {
                std::cerr << e.what() << "\n";
                return exit_config;
            }
            return 0;
        }
        for (const auto& name : preset_names()) std::cout << name << "\n";
        return 0;
    }

    ExperimentConfig cfg;
    std::optional<Sweep> sweep;
    try {
        if (config_path.empty() == preset.empty()) {
            throw ConfigError({"give exactly one of a config file or --preset"});
        }
        cfg = preset.empty() ? parse_config(read_file(config_path)) : load_preset(preset);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed) set_parameter(cfg, "seed", static_cast<double>(*seed));
        if (dt) set_parameter(cfg, "dt", *dt);
        if (t_end) set_parameter(cfg, "t_end", *t_end);
        if (no_plots) cfg.plots = false;
        if (auto p = cfg.problems(); !p.empty()) throw ConfigError(std::move(p));
        if (!sweep_spec.empty()) sweep = parse_sweep(sweep_spec);
    } catch (const std::exception& e) {
        return report_error(e);
    }

    if (!sweep) {
        const Outcome o = run_one(cfg);
        (o.code >= exit_config ? std::cerr : std::cout) << o.text;
        return o.code;
    }

    std::vector<ExperimentConfig> configs;
    try {
        for (double v : sweep->values) {
            ExperimentConfig c = cfg;
            set_parameter(c, sweep->key, v);
            c.out_dir = cfg.out_dir / (sweep->key + "=" + shortest(v));
            if (auto p = c.problems(); !p.empty()) throw ConfigError(std::move(p));
            configs.push_back(std::move(c));
        }
    } catch (const std::exception& e) {
        return report_error(e);
    }

    std::vector<std::future<Outcome>> jobs;
    for (const auto& c : configs) jobs.push_back(std::async(std::launch::async, run_one, c));
    int code = 0;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const Outcome o = jobs[k].get();
        std::cout << "== " << sweep->key << "=" << shortest(sweep->values[k]) << " (exit " << o.code << ")\n" << o.text;
        code = std::max(code, o.code);
    }
    return code;
}
