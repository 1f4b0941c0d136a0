#include "adaptopt/engine.hpp"

#include <cmath>
#include <random>

#include "adaptopt/errors.hpp"
#include "adaptopt/random.hpp"
#include "strcat.hpp"

namespace adaptopt {

std::string to_string(Integrator integrator) { return integrator == Integrator::Euler ? "euler" : "imex"; }

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> p)
    : std::invalid_argument(join(p)), problems(std::move(p)) {}

ProtocolState initial_state(const InitialCondition& init, std::size_t n, std::size_t m, Mode mode) {
    ProtocolState s = ProtocolState::zeros(n, m, mode);
    std::mt19937_64 rng(init.box_seed);
    const double w = init.box_half_width;
    if (init.x) {
        if (init.x->rows() != s.x.rows() || init.x->cols() != s.x.cols()) {
            throw DomainError(cat("initial positions are ", init.x->rows(), "x", init.x->cols(), ", expected ", n, "x", m));
        }
        s.x = *init.x;
    } else {
        for (Eigen::Index i = 0; i < s.x.rows(); ++i)
            for (Eigen::Index k = 0; k < s.x.cols(); ++k) s.x(i, k) = uniform(rng, -w, w);
    }
    if (mode == Mode::Double) {
        if (init.v) {
            if (init.v->rows() != s.v.rows() || init.v->cols() != s.v.cols()) {
                throw DomainError(cat("initial velocities are ", init.v->rows(), "x", init.v->cols(), ", expected ", n, "x", m));
            }
            s.v = *init.v;
        } else if (init.random_velocity) {
            for (Eigen::Index i = 0; i < s.v.rows(); ++i)
                for (Eigen::Index k = 0; k < s.v.cols(); ++k) s.v(i, k) = uniform(rng, -w, w);
        }
    }
    return s;
}

std::size_t SimConfig::step_count() const {
    // Tolerate t_end values that are an integer multiple of dt up to rounding.
    return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
}

std::vector<std::string> SimConfig::problems() const {
    std::vector<std::string> out = params.problems();
    if (!(dt > 0.0) || !std::isfinite(dt)) out.push_back(cat("dt must be positive, got ", dt));
    if (!(t_end >= dt)) out.push_back(cat("t_end (", t_end, ") must be at least dt (", dt, ")"));
    if (sample_every == 0) out.push_back("sample_every must be at least 1");
    if (team.size() == 0) out.push_back("no objectives configured");
    // The dwell bound only matters when the topology actually switches.
    if (schedule.segments.size() > 1 && dt > schedule.dwell_min / 10.0) {
        out.push_back(cat("dt (", dt, ") exceeds dwell_min / 10 (", schedule.dwell_min / 10.0, ")"));
    }
    for (const auto& v : validate_schedule(schedule)) out.push_back("schedule: " + v.message);
    if (!schedule.segments.empty() && team.size() != 0 && schedule.segments.front().topology.size() != team.size()) {
        out.push_back(cat("schedule has ", schedule.segments.front().topology.size(), " agents but ", team.size(),
                          " objectives are configured"));
    }
    return out;
}

ProtocolState RunRecord::state(std::size_t k) const {
    ProtocolState s;
    s.x = x[k];
    if (!v.empty()) s.v = v[k];
    s.q = q[k];
    return s;
}

namespace {

const Topology& topology_at(double t, const SimConfig& cfg) {
    const std::size_t k = cfg.schedule.segment_index(t);
    if (cfg.topology_probe) cfg.topology_probe(t, k);
    return cfg.schedule.segments[k].topology;
}

void check_finite(const ProtocolState& s, double t) {
    for (Eigen::Index i = 0; i < s.x.rows(); ++i) {
        const bool ok = s.x.row(i).allFinite() && (s.v.size() == 0 || s.v.row(i).allFinite());
        if (!ok) {
            throw NumericError(cat("non-finite state for agent ", i, " after step at t = ", t), t,
                               static_cast<std::size_t>(i));
        }
    }
}

ProtocolState step_with(const ProtocolState& s, const Topology& g, const SimConfig& cfg) {
    const auto& params = cfg.params;
    const double dt = cfg.dt;
    const std::size_t n = s.agents();
    ProtocolState next;
    next.q = step_gains(s, g, dt, params);

    if (cfg.integrator == Integrator::Euler) {
        Eigen::MatrixXd u(s.x.rows(), s.x.cols());
        for (std::size_t i = 0; i < n; ++i) {
            u.row(static_cast<Eigen::Index>(i)) = control(i, s, g, cfg.team, params).transpose();
        }
        if (params.mode == Mode::Single) {
            next.x = s.x + dt * u;
        } else {
            next.x = s.x + dt * s.v;
            next.v = s.v + dt * u;
        }
        return next;
    }

    if (params.mode == Mode::Single) {
        Eigen::MatrixXd w = s.x;
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            w.row(r) -= dt * grad(cfg.team[i], s.position(i)).transpose();
        }
        next.x = interaction_prox(w, s.q, g, params.eps_norm, dt);
        return next;
    }

    // Double mode in vbar coordinates: the interaction acts on vbar with weight 2/p.
    const double p = params.p;
    const Eigen::MatrixXd vbar = transform_vbar(s.x, s.v, p);
    Eigen::MatrixXd w = vbar - dt * s.v;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        w.row(r) -= dt * (2.0 / p) * grad(cfg.team[i], vbar.row(r).transpose()).transpose();
    }
    const Eigen::MatrixXd vbar_next = interaction_prox(w, s.q, g, params.eps_norm, dt * 2.0 / p);
    next.x = s.x + dt * s.v;
    next.v = 0.5 * p * (vbar_next - next.x);
    return next;
}

}  // namespace

ProtocolState step(const ProtocolState& state, double t, const SimConfig& cfg) {
    ProtocolState next = step_with(state, topology_at(t, cfg), cfg);
    check_finite(next, t);
    return next;
}

RunRecord run(const SimConfig& cfg) {
    if (auto p = cfg.problems(); !p.empty()) throw ConfigError(std::move(p));
    for (const auto& f : cfg.team.members()) (void)local_minimizer_set_bound(f);

    const std::size_t n = cfg.team.size();
    const std::size_t m = cfg.team.dimension();
    RunRecord rec;
    rec.mode = cfg.params.mode;

    auto record = [&](std::size_t k, double t, const ProtocolState& s) {
        rec.times.push_back(t);
        rec.steps.push_back(k);
        rec.segments.push_back(cfg.schedule.segment_index(t));
        rec.x.push_back(s.x);
        if (s.has_velocity()) rec.v.push_back(s.v);
        rec.q.push_back(s.q);
    };

    ProtocolState s = initial_state(cfg.initial, n, m, cfg.params.mode);
    record(0, 0.0, s);
    const std::size_t steps = cfg.step_count();
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        try {
            s = step(s, t, cfg);
        } catch (NumericError& e) {
            e.partial = std::make_shared<RunRecord>(std::move(rec));
            throw;
        }
        const std::size_t done = k + 1;
        if (done % cfg.sample_every == 0 || done == steps) record(done, static_cast<double>(done) * cfg.dt, s);
    }
    return rec;
}

TransformedState step_transformed(const TransformedState& state, double t, const SimConfig& cfg) {
    const Topology& g = topology_at(t, cfg);
    ProtocolState gain_view;
    gain_view.x = state.x;
    gain_view.v = 0.5 * cfg.params.p * (state.vbar - state.x);
    gain_view.q = state.q;

    TransformedState next;
    next.q = step_gains(gain_view, g, cfg.dt, cfg.params);
    next.x = state.x;
    next.vbar = state.vbar;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const auto rates = transformed_rates(i, state.x, state.vbar, state.q, g, cfg.team, cfg.params);
        next.x.row(r) += cfg.dt * rates.x_dot.transpose();
        next.vbar.row(r) += cfg.dt * rates.vbar_dot.transpose();
    }
    return next;
}

}  // namespace adaptopt
