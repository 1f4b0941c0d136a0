#include "adaptopt/monitor.hpp"

#include <algorithm>
#include <cmath>

namespace adaptopt {

double lyapunov_v(const ProtocolState& s, const Point& z, Mode mode, double p) {
    const Eigen::RowVectorXd zr = z.transpose();
    double v = 0.5 * (s.x.rowwise() - zr).squaredNorm();
    if (mode == Mode::Double) v += 0.5 * (transform_vbar(s.x, s.v, p).rowwise() - zr).squaredNorm();
    return v;
}

double lyapunov_v1(const ProtocolState& s, const Point& minimizer) {
    const Point mean = s.x.colwise().mean().transpose();
    return 0.5 * (mean - minimizer).squaredNorm();
}

double lyapunov_v1(const ProtocolState& s, const TeamObjective& team) {
    return lyapunov_v1(s, minimizer_team(team, 1e-12));
}

double consensus_diameter(const ProtocolState& s) {
    double d = 0.0;
    for (Eigen::Index i = 0; i < s.x.rows(); ++i)
        for (Eigen::Index j = i + 1; j < s.x.rows(); ++j) d = std::max(d, (s.x.row(i) - s.x.row(j)).norm());
    return d;
}

double interaction_dissipation(const ProtocolState& s, const Topology& g, const Point& z,
                               const ProtocolParams& params) {
    const Eigen::MatrixXd args = params.mode == Mode::Double ? transform_vbar(s.x, s.v, params.p) : s.x;
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Point offset = args.row(static_cast<Eigen::Index>(i)).transpose() - z;
        sum += offset.dot(interaction(i, args, s.q, g, params.eps_norm));
    }
    return sum;
}

MonitorSample monitor_sample(double t, const ProtocolState& s, const Topology& g, const TeamObjective& team,
                             const Point& minimizer, const ProtocolParams& params) {
    const Point mean = s.x.colwise().mean().transpose();
    MonitorSample m;
    m.t = t;
    m.V = lyapunov_v(s, minimizer, params.mode, params.p);
    m.V1 = lyapunov_v1(s, minimizer);
    m.diameter = consensus_diameter(s);
    m.team_value_at_mean = team_eval(team, mean);
    m.grad_sum_norm = team_grad(team, mean).norm();
    m.max_gain = s.q.size() == 0 ? 0.0 : s.q.maxCoeff();
    m.max_speed = s.has_velocity() ? s.v.rowwise().norm().maxCoeff() : 0.0;
    m.interaction_dissipation = interaction_dissipation(s, g, minimizer, params);
    return m;
}

double gain_growth_last_quarter(const RunRecord& record) {
    if (record.size() < 2) return 0.0;
    const std::size_t last = record.size() - 1;
    const std::size_t start = last - record.size() / 4;
    const double final_gain = record.q[last].maxCoeff();
    if (final_gain <= 0.0) return 0.0;
    return (final_gain - record.q[start].maxCoeff()) / final_gain;
}

MonitorReport annotate(RunRecord& record, const TeamObjective& team, const ProtocolParams& params,
                       const TopologySchedule& schedule, std::optional<double> consensus_threshold) {
    MonitorReport report;
    report.minimizer = minimizer_team(team, 1e-12);
    report.consensus_threshold = consensus_threshold.value_or(10.0 * params.eps_norm);
    report.max_dissipation = -INFINITY;

    record.monitors.clear();
    record.monitors.reserve(record.size());
    for (std::size_t k = 0; k < record.size(); ++k) {
        const ProtocolState s = record.state(k);
        const Topology& g = schedule.segments.at(record.segments[k]).topology;
        const MonitorSample m = monitor_sample(record.times[k], s, g, team, report.minimizer, params);
        record.monitors.push_back(m);
        if (!report.consensus_time && m.diameter <= report.consensus_threshold) report.consensus_time = m.t;
        report.max_dissipation = std::max(report.max_dissipation, m.interaction_dissipation);
        report.max_state_norm = std::max(report.max_state_norm, s.x.rowwise().norm().maxCoeff());
    }
    if (!record.monitors.empty()) report.final_max_gain = record.monitors.back().max_gain;
    report.gain_growth_last_quarter = gain_growth_last_quarter(record);
    return report;
}

GainCertificate check_gains(const RunRecord& record) {
    GainCertificate c;
    for (std::size_t k = 0; k < record.q.size(); ++k) {
        const Eigen::MatrixXd& q = record.q[k];
        if (q != q.transpose()) c.symmetric = false;
        if (q.diagonal().cwiseAbs().maxCoeff() != 0.0) c.zero_diagonal = false;
        if (q.minCoeff() < 0.0) c.nonnegative = false;
        if (k > 0 && (q.array() < record.q[k - 1].array()).any()) c.nondecreasing = false;
    }
    return c;
}

}  // namespace adaptopt
