#pragma once

#include <optional>

#include "adaptopt/engine.hpp"
#include "adaptopt/monitor_sample.hpp"

namespace adaptopt {

double lyapunov_v(const ProtocolState& s, const Point& z, Mode mode, double p = 1.0);

double lyapunov_v1(const ProtocolState& s, const Point& minimizer);
double lyapunov_v1(const ProtocolState& s, const TeamObjective& team);

double consensus_diameter(const ProtocolState& s);

/// sum_i (a_i - z)^T sum_{j in N_i} q_ij norm_dir(a_j - a_i, eps_norm), where a
/// is the argument the interaction acts on (x in single mode, vbar in double
/// mode). Rewritten over edges it equals -sum q_ij (a_j - a_i)^T norm_dir(a_j - a_i),
/// so it is <= 0 and independent of z.
double interaction_dissipation(const ProtocolState& s, const Topology& g, const Point& z,
                               const ProtocolParams& params);

MonitorSample monitor_sample(double t, const ProtocolState& s, const Topology& g, const TeamObjective& team,
                             const Point& minimizer, const ProtocolParams& params);

struct MonitorReport {
    Point minimizer;
    double consensus_threshold = 0.0;
    std::optional<double> consensus_time;  ///< first sample time with diameter <= threshold
    double final_max_gain = 0.0;
    double gain_growth_last_quarter = 0.0;  ///< relative to final_max_gain
    double max_dissipation = 0.0;           ///< largest (least negative) dissipation seen
    double max_state_norm = 0.0;
};

/// Fills record.monitors (one sample per recorded state). V is evaluated at the
/// computed team minimizer. The consensus threshold defaults to 10 * eps_norm.
MonitorReport annotate(RunRecord& record, const TeamObjective& team, const ProtocolParams& params,
                       const TopologySchedule& schedule, std::optional<double> consensus_threshold = std::nullopt);

struct GainCertificate {
    bool symmetric = true;
    bool zero_diagonal = true;
    bool nonnegative = true;
    bool nondecreasing = true;
    bool ok() const { return symmetric && zero_diagonal && nonnegative && nondecreasing; }
};

GainCertificate check_gains(const RunRecord& record);

/// Relative growth of the max gain over the final quarter of the samples.
double gain_growth_last_quarter(const RunRecord& record);

}  // namespace adaptopt
