#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adaptopt/engine.hpp"

namespace adaptopt {

struct PlotFiles {
    std::filesystem::path trajectories;
    std::filesystem::path monitors;
};

/// Per-coordinate state trajectories against time, one trace per agent and coordinate.
std::string trajectory_svg(const RunRecord& record);

/// V, V1, diameter and max_gain against time on a log axis (non-positive values are skipped).
std::string monitor_svg(const RunRecord& record);

/// Writes trajectories.svg and monitors.svg into dir. Output carries no
/// timestamps, so equal records give byte-identical files.
PlotFiles render_plots(const RunRecord& record, const std::filesystem::path& dir);

}  // namespace adaptopt
