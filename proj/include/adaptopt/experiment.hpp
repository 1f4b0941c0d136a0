#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adaptopt/config.hpp"
#include "adaptopt/engine.hpp"
#include "adaptopt/monitor.hpp"

namespace adaptopt {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Summary {
    Point final_point;                 ///< mean of the final positions
    Point minimizer;                   ///< computed team minimizer
    double distance_to_minimizer = 0;  ///< |final_point - minimizer|
    double worst_agent_distance = 0;   ///< max_i |x_i(t_end) - minimizer|
    double final_team_value = 0;       ///< team objective at final_point
    double final_diameter = 0;
    std::optional<double> consensus_time;
    double consensus_threshold = 0;
    double max_gain = 0;
    double max_speed_final = 0;
    std::vector<CheckResult> checks;

    bool passed() const;
    int exit_code() const { return passed() ? 0 : 1; }
};

struct ExperimentResult {
    RunRecord record;
    MonitorReport report;
    Summary summary;
};

/// Runs, annotates and checks one experiment. With write_files, also writes
/// record.csv, config.json, summary.json and (if enabled) the SVG plots into
/// cfg.out_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files = true);

Summary summarize(const ExperimentConfig& cfg, const RunRecord& record, const MonitorReport& report);

std::string format_summary(const Summary& s);
std::string summary_json(const Summary& s);

}  // namespace adaptopt
