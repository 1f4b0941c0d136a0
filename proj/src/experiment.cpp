#include "adaptopt/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "adaptopt/csv.hpp"
#include "adaptopt/plot.hpp"
#include "strcat.hpp"

namespace adaptopt {

bool Summary::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string point_str(const Point& p) {
    std::string s = "(";
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", p[k]);
        s += (k ? ", " : "") + std::string(buf);
    }
    return s + ")";
}

}  // namespace

Summary summarize(const ExperimentConfig& cfg, const RunRecord& record, const MonitorReport& report) {
    Summary s;
    const Eigen::MatrixXd& x = record.x.back();
    s.final_point = x.colwise().mean().transpose();
    s.minimizer = report.minimizer;
    s.distance_to_minimizer = (s.final_point - s.minimizer).norm();
    s.worst_agent_distance = (x.rowwise() - s.minimizer.transpose()).rowwise().norm().maxCoeff();
    s.final_team_value = record.monitors.back().team_value_at_mean;
    s.final_diameter = record.monitors.back().diameter;
    s.consensus_time = report.consensus_time;
    s.consensus_threshold = report.consensus_threshold;
    s.max_gain = report.final_max_gain;
    s.max_speed_final = record.monitors.back().max_speed;

    const auto& ck = cfg.checks;
    s.checks.push_back({"dissipation", report.max_dissipation <= ck.dissipation_tol,
                        cat("max interaction dissipation ", sci(report.max_dissipation), " <= ", sci(ck.dissipation_tol))});
    const GainCertificate gains = check_gains(record);
    s.checks.push_back({"gain_certificate", gains.ok(),
                        cat("symmetric=", gains.symmetric, " zero_diagonal=", gains.zero_diagonal,
                            " nonnegative=", gains.nonnegative, " nondecreasing=", gains.nondecreasing)});
    s.checks.push_back({"gain_plateau", report.gain_growth_last_quarter < ck.plateau_tol,
                        cat("max-gain growth over final quarter ", sci(report.gain_growth_last_quarter), " < ",
                            sci(ck.plateau_tol))});
    s.checks.push_back({"consensus", s.final_diameter <= s.consensus_threshold,
                        cat("final diameter ", sci(s.final_diameter), " <= ", sci(s.consensus_threshold))});
    s.checks.push_back({"optimality", s.worst_agent_distance < ck.optimum_tol,
                        cat("worst agent distance to minimizer ", sci(s.worst_agent_distance), " < ", sci(ck.optimum_tol))});
    if (record.mode == Mode::Double) {
        s.checks.push_back({"velocity_decay", s.max_speed_final < ck.speed_tol,
                            cat("final max speed ", sci(s.max_speed_final), " < ", sci(ck.speed_tol))});
    }
    const double initial_radius = record.x.front().rowwise().norm().maxCoeff();
    const double bound = 10.0 * initial_radius + s.minimizer.norm();
    s.checks.push_back({"bounded_states", report.max_state_norm <= bound,
                        cat("max state norm ", sci(report.max_state_norm), " <= ", sci(bound))});
    return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files) {
    const SimConfig sim = cfg.to_sim_config();
    ExperimentResult result;
    result.record = run(sim);
    result.report = annotate(result.record, sim.team, sim.params, sim.schedule, cfg.checks.consensus_threshold);
    result.summary = summarize(cfg, result.record, result.report);

    if (write_files) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.out_dir, ec);
        if (ec) throw IoError(cat("cannot create output directory ", cfg.out_dir.string(), ": ", ec.message()));
        write_csv(result.record, cfg.out_dir / "record.csv");
        auto write_text = [](const std::filesystem::path& p, const std::string& text) {
            std::ofstream f(p, std::ios::binary);
            if (!f) throw IoError(cat("cannot open ", p.string(), " for writing"));
            f << text << '\n';
        };
        write_text(cfg.out_dir / "config.json", to_json(cfg));
        write_text(cfg.out_dir / "summary.json", summary_json(result.summary));
        if (cfg.plots) render_plots(result.record, cfg.out_dir);
    }
    return result;
}

std::string format_summary(const Summary& s) {
    std::string out;
    out += cat("final consensus point   ", point_str(s.final_point), "\n");
    out += cat("team minimizer          ", point_str(s.minimizer), "\n");
    out += cat("distance to minimizer   ", sci(s.distance_to_minimizer), " (worst agent ", sci(s.worst_agent_distance), ")\n");
    out += cat("final team value        ", s.final_team_value, "\n");
    out += cat("final diameter          ", sci(s.final_diameter), "\n");
    out += cat("consensus time          ",
               s.consensus_time ? cat(*s.consensus_time, " (diameter <= ", sci(s.consensus_threshold), ")")
                                : cat("not reached (threshold ", sci(s.consensus_threshold), ")"),
               "\n");
    out += cat("max gain                ", s.max_gain, "\n");
    out += cat("final max speed         ", sci(s.max_speed_final), "\n");
    for (const auto& c : s.checks) out += cat(c.passed ? "PASS  " : "FAIL  ", c.name, ": ", c.detail, "\n");
    return out;
}

std::string summary_json(const Summary& s) {
    nlohmann::json j;
    j["final_point"] = std::vector<double>(s.final_point.begin(), s.final_point.end());
    j["minimizer"] = std::vector<double>(s.minimizer.begin(), s.minimizer.end());
    j["distance_to_minimizer"] = s.distance_to_minimizer;
    j["worst_agent_distance"] = s.worst_agent_distance;
    j["final_team_value"] = s.final_team_value;
    j["final_diameter"] = s.final_diameter;
    j["consensus_time"] = s.consensus_time ? nlohmann::json(*s.consensus_time) : nlohmann::json(nullptr);
    j["consensus_threshold"] = s.consensus_threshold;
    j["max_gain"] = s.max_gain;
    j["max_speed_final"] = s.max_speed_final;
    j["passed"] = s.passed();
    for (const auto& c : s.checks) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return j.dump(2);
}

}  // namespace adaptopt
