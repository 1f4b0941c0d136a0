#pragma once

namespace adaptopt {

/// Diagnostics evaluated on one recorded sample.
struct MonitorSample {
    double t = 0.0;
    double V = 0.0;                   ///< 1/2 sum |x_i - z|^2 (+ 1/2 sum |vbar_i - z|^2 in double mode)
    double V1 = 0.0;                  ///< 1/2 |mean(x) - minimizer|^2
    double diameter = 0.0;            ///< max pairwise |x_i - x_j|
    double team_value_at_mean = 0.0;  ///< sum_i f_i(mean(x))
    double grad_sum_norm = 0.0;       ///< |sum_i grad f_i(mean(x))|
    double max_gain = 0.0;
    double max_speed = 0.0;           ///< max |v_i|; 0 in single mode
    double interaction_dissipation = 0.0;

    friend bool operator==(const MonitorSample&, const MonitorSample&) = default;
};

}  // namespace adaptopt
