#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adaptopt/engine.hpp"

namespace adaptopt {

/// Explicit list of (start time, edge list) segments.
struct ExplicitSchedule {
    struct Segment {
        double start = 0.0;
        std::vector<Edge> edges;
    };
    std::vector<Segment> segments;
    double dwell = 0.0;
};

/// Independent connected subgraphs of `base`, one per dwell interval.
struct RandomSubgraphSchedule {
    std::vector<Edge> base;
    double dwell = 0.5;
    std::optional<std::uint64_t> seed;
};

/// Thresholds for the pass/fail checks printed after a run.
struct Checks {
    double optimum_tol = 0.05;
    std::optional<double> consensus_threshold;  ///< defaults to 10 * eps_norm
    double speed_tol = 1e-2;
    double plateau_tol = 0.01;
    double dissipation_tol = 1e-12;
};

struct ExperimentConfig {
    std::string preset;
    Mode mode = Mode::Single;
    std::size_t dimension = 2;
    std::vector<std::vector<Term>> objectives;
    std::variant<ExplicitSchedule, RandomSubgraphSchedule> schedule;
    ProtocolParams protocol;
    Integrator integrator = Integrator::Imex;
    double dt = 1e-3;
    double t_end = 30.0;
    std::size_t sample_every = 10;
    std::uint64_t seed = 1;

    struct Initial {
        double box = 5.0;
        std::optional<std::uint64_t> seed;
        bool random_velocity = false;
        std::optional<std::vector<std::vector<double>>> x;
        std::optional<std::vector<std::vector<double>>> v;
    } initial;

    Checks checks;
    std::filesystem::path out_dir = "out";
    bool plots = true;

    std::size_t agents() const { return objectives.size(); }

    /// Builds the objectives and the (possibly random) schedule. Throws ConfigError.
    SimConfig to_sim_config() const;

    /// Semantic problems, all of them; empty when the config is runnable.
    std::vector<std::string> problems() const;
};

/// Parse failure in the document itself (bad JSON, wrong type, unknown key).
class ParseError : public std::invalid_argument {
public:
    ParseError(std::string what, std::size_t line, std::string field)
        : std::invalid_argument(std::move(what)), line(line), field(std::move(field)) {}
    std::size_t line;   ///< 0 when not applicable
    std::string field;  ///< JSON pointer of the offending field, may be empty
};

/// Parses a JSON experiment document. A "preset" key selects a base document
/// which the remaining keys override (RFC 7386 merge). Unknown keys are
/// rejected; semantic problems are reported together in one ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_preset(std::string_view name);

std::vector<std::string> preset_names();
/// The JSON document shipped for a preset.
std::string preset_document(std::string_view name);

/// Resolved configuration as a JSON document, parseable by parse_config.
std::string to_json(const ExperimentConfig& cfg);

/// Sets one scalar parameter by name (seed, dt, t_end, p, eps_norm, eps_sign,
/// sample_every). Used by CLI overrides and sweeps.
void set_parameter(ExperimentConfig& cfg, std::string_view key, double value);

}  // namespace adaptopt
