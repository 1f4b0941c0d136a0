#include "adaptopt/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "adaptopt/errors.hpp"
#include "strcat.hpp"

namespace adaptopt {

std::string to_string(Mode mode) { return mode == Mode::Single ? "single" : "double"; }
std::string to_string(GainArgument arg) { return arg == GainArgument::Position ? "position" : "vbar"; }

std::vector<std::string> ProtocolParams::problems() const {
    std::vector<std::string> out;
    if (!(p > 0.0) || !std::isfinite(p)) out.push_back(cat("p must be positive, got ", p));
    if (!(eps_norm > 0.0) || !std::isfinite(eps_norm)) out.push_back(cat("eps_norm must be positive, got ", eps_norm));
    if (!(eps_sign > 0.0)) out.push_back(cat("eps_sign must be positive, got ", eps_sign));
    if (eps_sign > eps_norm) out.push_back(cat("eps_sign (", eps_sign, ") must not exceed eps_norm (", eps_norm, ")"));
    return out;
}

ProtocolState ProtocolState::zeros(std::size_t n, std::size_t m, Mode mode) {
    const auto rn = static_cast<Eigen::Index>(n);
    const auto rm = static_cast<Eigen::Index>(m);
    ProtocolState s;
    s.x = Eigen::MatrixXd::Zero(rn, rm);
    if (mode == Mode::Double) s.v = Eigen::MatrixXd::Zero(rn, rm);
    s.q = Eigen::MatrixXd::Zero(rn, rn);
    return s;
}

Point norm_dir(const Point& d, double eps_norm) {
    const double len = d.norm();
    return d / std::max(len, eps_norm);
}

Point interaction(std::size_t i, const Eigen::MatrixXd& args, const Eigen::MatrixXd& q, const Topology& g,
                  double eps_norm) {
    const auto ri = static_cast<Eigen::Index>(i);
    Point sum = Point::Zero(args.cols());
    for (std::size_t j : g.neighbors(i)) {
        const auto rj = static_cast<Eigen::Index>(j);
        const double qij = q(ri, rj);
        if (qij == 0.0) continue;
        sum += qij * norm_dir((args.row(rj) - args.row(ri)).transpose(), eps_norm);
    }
    return sum;
}

Point transform_vbar(const Point& x, const Point& v, double p) { return x + (2.0 / p) * v; }

Eigen::MatrixXd transform_vbar(const Eigen::MatrixXd& x, const Eigen::MatrixXd& v, double p) {
    return x + (2.0 / p) * v;
}

namespace {

void check_shapes(std::size_t i, const ProtocolState& s, const Topology& g, const TeamObjective& team) {
    if (i >= s.agents()) throw DomainError(cat("agent index ", i, " out of range for ", s.agents(), " agents"));
    if (g.size() != s.agents() || team.size() != s.agents()) {
        throw DomainError(cat("state has ", s.agents(), " agents, topology ", g.size(), ", objectives ", team.size()));
    }
    if (team.dimension() != s.dimension()) {
        throw DomainError(cat("state dimension ", s.dimension(), " differs from objective dimension ", team.dimension()));
    }
}

}  // namespace

Point control_single(std::size_t i, const ProtocolState& s, const Topology& g, const TeamObjective& team,
                     const ProtocolParams& params) {
    check_shapes(i, s, g, team);
    return interaction(i, s.x, s.q, g, params.eps_norm) - grad(team[i], s.position(i));
}

Point control_double(std::size_t i, const ProtocolState& s, const Topology& g, const TeamObjective& team,
                     const ProtocolParams& params) {
    check_shapes(i, s, g, team);
    if (!s.has_velocity()) throw DomainError("double-integrator control needs velocities");
    const Eigen::MatrixXd vbar = transform_vbar(s.x, s.v, params.p);
    const Point vi = s.velocity(i);
    const Point vbar_i = vbar.row(static_cast<Eigen::Index>(i)).transpose();
    return -params.p * vi + interaction(i, vbar, s.q, g, params.eps_norm) - grad(team[i], vbar_i);
}

Point control(std::size_t i, const ProtocolState& s, const Topology& g, const TeamObjective& team,
              const ProtocolParams& params) {
    return params.mode == Mode::Single ? control_single(i, s, g, team, params)
                                       : control_double(i, s, g, team, params);
}

double gain_rate(std::size_t i, std::size_t j, const ProtocolState& s, const Topology& g, double eps_sign) {
    if (i == j || !g.has_edge(i, j)) return 0.0;
    const auto ri = static_cast<Eigen::Index>(i);
    const auto rj = static_cast<Eigen::Index>(j);
    return (s.x.row(rj) - s.x.row(ri)).norm() > eps_sign ? 1.0 : 0.0;
}

double gain_rate(std::size_t i, std::size_t j, const ProtocolState& s, const Topology& g,
                 const ProtocolParams& params) {
    if (params.mode == Mode::Double && params.gain_argument == GainArgument::Vbar) {
        ProtocolState view;
        view.x = transform_vbar(s.x, s.v, params.p);
        return gain_rate(i, j, view, g, params.eps_sign);
    }
    return gain_rate(i, j, s, g, params.eps_sign);
}

Eigen::MatrixXd step_gains(const ProtocolState& s, const Topology& g, double dt, const ProtocolParams& params) {
    Eigen::MatrixXd q = s.q;
    ProtocolState view;
    const bool use_vbar = params.mode == Mode::Double && params.gain_argument == GainArgument::Vbar;
    const Eigen::MatrixXd& args = use_vbar ? (view.x = transform_vbar(s.x, s.v, params.p)) : s.x;
    for (const Edge& e : g.edges()) {
        const auto ri = static_cast<Eigen::Index>(e.i);
        const auto rj = static_cast<Eigen::Index>(e.j);
        if ((args.row(rj) - args.row(ri)).norm() > params.eps_sign) {
            q(ri, rj) += dt;
            q(rj, ri) = q(ri, rj);
        }
    }
    return q;
}

TransformedRates transformed_rates(std::size_t i, const Eigen::MatrixXd& x, const Eigen::MatrixXd& vbar,
                                   const Eigen::MatrixXd& q, const Topology& g, const TeamObjective& team,
                                   const ProtocolParams& params) {
    const auto ri = static_cast<Eigen::Index>(i);
    const double half_p = 0.5 * params.p;
    const double two_over_p = 2.0 / params.p;
    const Point xi = x.row(ri).transpose();
    const Point vi = vbar.row(ri).transpose();
    TransformedRates r;
    r.x_dot = half_p * vi - half_p * xi;
    r.vbar_dot = -half_p * vi + half_p * xi + two_over_p * interaction(i, vbar, q, g, params.eps_norm) -
                 two_over_p * grad(team[i], vi);
    return r;
}

namespace {

double huber(double len, double eps) { return len >= eps ? len : 0.5 * (len * len / eps + eps); }

Eigen::VectorXd flatten(const Eigen::MatrixXd& a) {
    Eigen::VectorXd out(a.size());
    for (Eigen::Index i = 0; i < a.rows(); ++i) out.segment(i * a.cols(), a.cols()) = a.row(i).transpose();
    return out;
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) out.row(i) = v.segment(i * cols, cols).transpose();
    return out;
}

}  // namespace

double interaction_potential(const Eigen::MatrixXd& args, const Eigen::MatrixXd& q, const Topology& g,
                             double eps_norm) {
    double sum = 0.0;
    for (const Edge& e : g.edges()) {
        const auto ri = static_cast<Eigen::Index>(e.i);
        const auto rj = static_cast<Eigen::Index>(e.j);
        if (q(ri, rj) == 0.0) continue;
        sum += q(ri, rj) * huber((args.row(ri) - args.row(rj)).norm(), eps_norm);
    }
    return sum;
}

Eigen::MatrixXd interaction_prox(const Eigen::MatrixXd& w, const Eigen::MatrixXd& q, const Topology& g,
                                 double eps_norm, double tau, ProxStats* stats) {
    const Eigen::Index n = w.rows();
    const Eigen::Index m = w.cols();
    const Eigen::Index dim = n * m;

    auto objective = [&](const Eigen::MatrixXd& y) {
        return tau * interaction_potential(y, q, g, eps_norm) + 0.5 * (y - w).squaredNorm();
    };
    auto gradient = [&](const Eigen::MatrixXd& y) {
        Eigen::MatrixXd out = y - w;
        for (Eigen::Index i = 0; i < n; ++i) {
            out.row(i) -= tau * interaction(static_cast<std::size_t>(i), y, q, g, eps_norm).transpose();
        }
        return out;
    };

    const double tol = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());
    Eigen::MatrixXd y = w;
    Eigen::MatrixXd grad_y = gradient(y);
    double value = objective(y);
    int iter = 0;
    constexpr int max_iterations = 100;
    for (; iter < max_iterations && grad_y.cwiseAbs().maxCoeff() > tol; ++iter) {
        // Row-major flattening: agent i, coordinate k -> i * m + k.
        Eigen::MatrixXd hessian = Eigen::MatrixXd::Identity(dim, dim);
        for (const Edge& e : g.edges()) {
            const auto ri = static_cast<Eigen::Index>(e.i);
            const auto rj = static_cast<Eigen::Index>(e.j);
            const double qij = q(ri, rj);
            if (qij == 0.0) continue;
            const Point d = (y.row(ri) - y.row(rj)).transpose();
            const double len = d.norm();
            Eigen::MatrixXd block;
            if (len < eps_norm) {
                block = Eigen::MatrixXd::Identity(m, m) / eps_norm;
            } else {
                const Point u = d / len;
                block = (Eigen::MatrixXd::Identity(m, m) - u * u.transpose()) / len;
            }
            block *= tau * qij;
            hessian.block(ri * m, ri * m, m, m) += block;
            hessian.block(rj * m, rj * m, m, m) += block;
            hessian.block(ri * m, rj * m, m, m) -= block;
            hessian.block(rj * m, ri * m, m, m) -= block;
        }
        const Eigen::VectorXd g_flat = flatten(grad_y);
        const Eigen::VectorXd step_flat = -hessian.llt().solve(g_flat);
        const Eigen::MatrixXd step = unflatten(step_flat, n, m);

        const double slope = g_flat.dot(step_flat);
        double alpha = 1.0;
        Eigen::MatrixXd trial = y + step;
        double trial_value = objective(trial);
        while (trial_value > value + 1e-4 * alpha * slope && alpha > 1e-10) {
            alpha *= 0.5;
            trial = y + alpha * step;
            trial_value = objective(trial);
        }
        if (alpha <= 1e-10) break;  // no further decrease representable
        y = std::move(trial);
        value = trial_value;
        grad_y = gradient(y);
    }
    if (stats) {
        stats->iterations = iter;
        stats->residual = grad_y.cwiseAbs().maxCoeff();
    }
    return y;
}

}  // namespace adaptopt
