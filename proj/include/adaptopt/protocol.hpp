#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adaptopt/graph.hpp"
#include "adaptopt/objective.hpp"

namespace adaptopt {

enum class Mode { Single, Double };

/// Which difference drives the gain dynamics in double mode. `Position` is
/// ||x_j - x_i||, as in the published law; `Vbar` uses ||vbar_j - vbar_i||.
enum class GainArgument { Position, Vbar };

std::string to_string(Mode mode);
std::string to_string(GainArgument arg);

struct ProtocolParams {
    Mode mode = Mode::Single;
    double p = 1.0;           ///< velocity damping (double mode only)
    double eps_norm = 1e-3;   ///< radius of the linear ramp replacing d/||d||
    double eps_sign = 5e-4;   ///< distances at or below this count as agreement
    GainArgument gain_argument = GainArgument::Position;

    /// Empty when valid, otherwise one message per broken constraint.
    std::vector<std::string> problems() const;
};

/// Agent states stored row-wise: x and v are n x m, q is n x n.
struct ProtocolState {
    Eigen::MatrixXd x;
    Eigen::MatrixXd v;  ///< n x m in double mode, 0 x 0 in single mode
    Eigen::MatrixXd q;

    static ProtocolState zeros(std::size_t n, std::size_t m, Mode mode);

    std::size_t agents() const { return static_cast<std::size_t>(x.rows()); }
    std::size_t dimension() const { return static_cast<std::size_t>(x.cols()); }
    bool has_velocity() const { return v.size() > 0; }
    Point position(std::size_t i) const { return x.row(static_cast<Eigen::Index>(i)).transpose(); }
    Point velocity(std::size_t i) const { return v.row(static_cast<Eigen::Index>(i)).transpose(); }
};

/// d / ||d|| outside the eps ball, d / eps inside. Continuous, odd, ||.|| <= 1.
Point norm_dir(const Point& d, double eps_norm);

/// sum_{j in N_i} q_ij * norm_dir(args_j - args_i), with args rows as agent coordinates.
Point interaction(std::size_t i, const Eigen::MatrixXd& args, const Eigen::MatrixXd& q, const Topology& g,
                  double eps_norm);

Point transform_vbar(const Point& x, const Point& v, double p);
Eigen::MatrixXd transform_vbar(const Eigen::MatrixXd& x, const Eigen::MatrixXd& v, double p);

/// Single-integrator law: interaction on positions minus the local gradient.
Point control_single(std::size_t i, const ProtocolState& s, const Topology& g, const TeamObjective& team,
                     const ProtocolParams& params);

/// Double-integrator law: -p v_i + interaction on vbar - grad f_i(vbar_i).
Point control_double(std::size_t i, const ProtocolState& s, const Topology& g, const TeamObjective& team,
                     const ProtocolParams& params);

Point control(std::size_t i, const ProtocolState& s, const Topology& g, const TeamObjective& team,
              const ProtocolParams& params);

/// dq_ij/dt: 1 on an active edge whose endpoints differ by more than eps_sign, else 0.
double gain_rate(std::size_t i, std::size_t j, const ProtocolState& s, const Topology& g, double eps_sign);
double gain_rate(std::size_t i, std::size_t j, const ProtocolState& s, const Topology& g,
                 const ProtocolParams& params);

/// Forward-Euler gain update over unordered pairs; result stays symmetric with zero diagonal.
Eigen::MatrixXd step_gains(const ProtocolState& s, const Topology& g, double dt, const ProtocolParams& params);

/// Rates of the closed loop written in (x, vbar) coordinates, for agent i.
struct TransformedRates {
    Point x_dot;
    Point vbar_dot;
};
TransformedRates transformed_rates(std::size_t i, const Eigen::MatrixXd& x, const Eigen::MatrixXd& vbar,
                                   const Eigen::MatrixXd& q, const Topology& g, const TeamObjective& team,
                                   const ProtocolParams& params);

/// Smooth convex potential whose negative gradient is the interaction term:
/// sum over edges of q_ij * H(args_i - args_j), H the Huber function of radius eps.
double interaction_potential(const Eigen::MatrixXd& args, const Eigen::MatrixXd& q, const Topology& g,
                             double eps_norm);

struct ProxStats {
    int iterations = 0;
    double residual = 0.0;
};

/// Implicit step for the interaction term: returns Y solving
///   Y_i = W_i + tau * interaction(i, Y),
/// i.e. the minimizer of tau * interaction_potential(Y) + |Y - W|^2 / 2,
/// found by damped Newton.
Eigen::MatrixXd interaction_prox(const Eigen::MatrixXd& w, const Eigen::MatrixXd& q, const Topology& g,
                                 double eps_norm, double tau, ProxStats* stats = nullptr);

}  // namespace adaptopt
