#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adaptopt/graph.hpp"
#include "adaptopt/monitor_sample.hpp"
#include "adaptopt/objective.hpp"
#include "adaptopt/protocol.hpp"

namespace adaptopt {

/// Time discretization of the closed loop.
///  - Euler: forward Euler on every term.
///  - Imex: forward Euler on gradients, damping and gains; backward Euler on the
///    interaction term (a proximal step on its Huber potential). Removes the
///    step-size restriction dt * q / eps_norm < O(1) that makes plain Euler
///    chatter inside the regularization ball.
enum class Integrator { Euler, Imex };

std::string to_string(Integrator integrator);

/// Initial positions (and velocities) either given explicitly or drawn
/// uniformly from [-half_width, half_width]^m; velocities drawn from the same box.
struct InitialCondition {
    std::optional<Eigen::MatrixXd> x;
    std::optional<Eigen::MatrixXd> v;
    double box_half_width = 5.0;
    std::uint64_t box_seed = 0;
    bool random_velocity = false;
};

ProtocolState initial_state(const InitialCondition& init, std::size_t n, std::size_t m, Mode mode);

struct SimConfig {
    double dt = 1e-3;
    double t_end = 30.0;
    std::size_t sample_every = 10;
    Integrator integrator = Integrator::Imex;
    ProtocolParams params;
    TeamObjective team;
    TopologySchedule schedule;
    InitialCondition initial;

    /// Called with (t, segment index) every time the engine looks up the topology.
    std::function<void(double, std::size_t)> topology_probe;

    std::vector<std::string> problems() const;
    std::size_t step_count() const;
};

/// Sampled trajectory of one run.
struct RunRecord {
    Mode mode = Mode::Single;
    std::vector<double> times;
    std::vector<std::size_t> steps;
    std::vector<std::size_t> segments;  ///< schedule segment active at each sample
    std::vector<Eigen::MatrixXd> x;
    std::vector<Eigen::MatrixXd> v;  ///< empty in single mode
    std::vector<Eigen::MatrixXd> q;
    std::vector<MonitorSample> monitors;  ///< filled by annotate()

    std::size_t size() const { return times.size(); }
    std::size_t agents() const { return x.empty() ? 0 : static_cast<std::size_t>(x.front().rows()); }
    std::size_t dimension() const { return x.empty() ? 0 : static_cast<std::size_t>(x.front().cols()); }
    ProtocolState state(std::size_t k) const;
};

class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> problems);
    std::vector<std::string> problems;
};

/// Raised when a state component becomes non-finite. `partial` holds every
/// sample recorded before the failure.
class NumericError : public std::runtime_error {
public:
    NumericError(std::string what, double t, std::size_t agent)
        : std::runtime_error(std::move(what)), time(t), agent(agent) {}
    double time;
    std::size_t agent;
    std::shared_ptr<RunRecord> partial;
};

/// One integration step from time t using the topology active at t.
ProtocolState step(const ProtocolState& state, double t, const SimConfig& cfg);

/// Validates the configuration (schedule, Assumption-1 bounds, step sizes),
/// then integrates from 0 to t_end, recording the initial state, every
/// `sample_every`-th step and the final state.
RunRecord run(const SimConfig& cfg);

/// Closed loop of the double integrator written in (x, vbar) coordinates,
/// advanced by forward Euler.
struct TransformedState {
    Eigen::MatrixXd x;
    Eigen::MatrixXd vbar;
    Eigen::MatrixXd q;
};

TransformedState step_transformed(const TransformedState& state, double t, const SimConfig& cfg);

}  // namespace adaptopt
