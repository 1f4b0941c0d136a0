// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>

#include "adaptopt/experiment.hpp"
#include "support.hpp"

using namespace adaptopt;

namespace {

struct Verdict {
    bool ok;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

const Point target = Point{{-1.0, -1.0}};

struct GoldenRun {
    ExperimentConfig cfg;
    SimConfig sim;
    RunRecord record;
    MonitorReport report;
    double seconds = 0.0;
};

GoldenRun golden(const std::string& preset, double dt_scale = 1.0) {
    GoldenRun g;
    g.cfg = load_preset(preset);
    g.cfg.dt *= dt_scale;
    g.cfg.sample_every = static_cast<std::size_t>(static_cast<double>(g.cfg.sample_every) / dt_scale);
    g.sim = g.cfg.to_sim_config();
    const auto t0 = std::chrono::steady_clock::now();
    g.record = run(g.sim);
    g.report = annotate(g.record, g.sim.team, g.sim.params, g.sim.schedule);
    g.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return g;
}

Point mean_position(const RunRecord& r) { return r.x.back().colwise().mean().transpose(); }

double worst_agent_distance(const RunRecord& r, const Point& p) {
    return (r.x.back().rowwise() - p.transpose()).rowwise().norm().maxCoeff();
}

double max_recorded_dissipation(const GoldenRun& g) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& m : g.record.monitors) worst = std::max(worst, m.interaction_dissipation);
    return worst;
}

Verdict criterion1(const GoldenRun& g) {
    const double dist = worst_agent_distance(g.record, target);
    const double value = team_eval(g.sim.team, mean_position(g.record));
    const bool ok = dist < 0.05 && std::abs(value - 6.0) < 0.05 && g.seconds < 60.0;
    return {ok, fmt("worst agent distance to (-1,-1) %.3e", dist) + fmt(", team value %.6f", value) +
                    fmt(", runtime %.2f s", g.seconds)};
}

Verdict criterion2(const GoldenRun& g) {
    const auto& last = g.record.monitors.back();
    const double dist = (mean_position(g.record) - target).norm();
    const bool ok = last.diameter < 1e-2 && last.max_speed < 1e-2 && dist < 0.05;
    return {ok, fmt("diameter %.3e", last.diameter) + fmt(", max speed %.3e", last.max_speed) +
                    fmt(", mean distance to (-1,-1) %.3e", dist) + fmt(", runtime %.2f s", g.seconds)};
}

Verdict criterion3(const GoldenRun& single, const GoldenRun& dbl) {
    std::mt19937_64 rng(3);
    double worst_random = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 9);
        const std::size_t m = 1 + uniform_index(rng, 3);
        const Mode mode = trial % 2 ? Mode::Double : Mode::Single;
        ProtocolParams params;
        params.mode = mode;
        params.p = uniform(rng, 0.2, 4.0);
        params.eps_norm = std::pow(10.0, uniform(rng, -4.0, 0.0));
        params.eps_sign = params.eps_norm / 2;
        ProtocolState s = ProtocolState::zeros(n, m, mode);
        s.x = support::random_matrix(rng, n, m, std::pow(10.0, uniform(rng, -4.0, 1.0)));
        if (mode == Mode::Double) s.v = support::random_matrix(rng, n, m, 2.0);
        s.q = support::random_gains(rng, n, 10.0);
        const Topology g = random_connected_subgraph(support::random_graph(rng, n, 1.0, false), rng);
        const Point z = support::random_point(rng, m, 10.0);
        worst_random = std::max(worst_random, interaction_dissipation(s, g, z, params));
    }
    const double worst_single = max_recorded_dissipation(single);
    const double worst_double = max_recorded_dissipation(dbl);
    const bool ok = worst_random <= 1e-12 && worst_single <= 1e-12 && worst_double <= 1e-12;
    return {ok, fmt("max over 500 random cases %.3e", worst_random) + fmt(", single run %.3e", worst_single) +
                    fmt(", double run %.3e", worst_double)};
}

Verdict criterion4(const GoldenRun& single, const GoldenRun& dbl) {
    const GainCertificate cs = check_gains(single.record);
    const GainCertificate cd = check_gains(dbl.record);
    const double gs = gain_growth_last_quarter(single.record);
    const double gd = gain_growth_last_quarter(dbl.record);
    const bool ok = cs.symmetric && cs.nondecreasing && cd.symmetric && cd.nondecreasing && gs < 0.01 && gd < 0.01;
    return {ok, std::string("symmetric/nondecreasing single ") + (cs.symmetric && cs.nondecreasing ? "yes" : "no") +
                    ", double " + (cd.symmetric && cd.nondecreasing ? "yes" : "no") +
                    fmt("; final-quarter growth single %.3e", gs) + fmt(" (max gain %.3f)", single.report.final_max_gain) +
                    fmt(", double %.3e", gd) + fmt(" (max gain %.3f)", dbl.report.final_max_gain)};
}

Verdict criterion5() {
    const TeamObjective team = benchmark_objectives();
    const Point s = minimizer_team(team, 1e-10);
    const double err = (s - target).cwiseAbs().maxCoeff();
    const double g = team_grad(team, s).norm();
    return {err <= 1e-6 && g <= 1e-8, fmt("|s - (-1,-1)|_inf %.3e", err) + fmt(", |team grad| %.3e", g)};
}

Verdict criterion6() {
    std::mt19937_64 rng(6);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + uniform_index(rng, 4);
        const ObjectiveSpec f = support::random_objective(rng, m);
        const Point x = support::random_point(rng, m, 4.0);
        const Point g = grad(f, x);
        worst = std::max(worst, (g - grad_fd(f, x, 1e-5)).norm() / std::max(1.0, g.norm()));
    }
    return {worst <= 1e-5, fmt("max relative error over 200 pairs %.3e", worst)};
}

Verdict criterion7() {
    std::mt19937_64 rng(7);
    int agree = 0;
    int exact = 0;
    int connected = 0;
    const int graphs = 20;
    for (int trial = 0; trial < graphs; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 9);
        const Topology g = support::random_graph(rng, n, uniform(rng, 0.15, 0.6), true);
        const Eigen::MatrixXd L = laplacian(g);
        exact += (L * Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n))).cwiseAbs().maxCoeff() == 0.0 ? 1 : 0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd& ev = es.eigenvalues();
        const double tol = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
        const auto zeros = (ev.array().abs() <= tol).count();
        agree += is_connected(g) == (zeros == 1) ? 1 : 0;
        connected += is_connected(g) ? 1 : 0;
    }
    const bool ok = agree == graphs && exact == graphs && connected > 0 && connected < graphs;
    return {ok, fmt("connectivity agrees with kernel dimension on %.0f", agree) + fmt("/%.0f graphs", graphs) +
                    fmt(" (%.0f connected)", connected) + fmt(", L*1 == 0 exactly on %.0f", exact)};
}

Verdict criterion8() {
    std::mt19937_64 rng(8);
    SimConfig cfg;
    cfg.integrator = Integrator::Euler;
    cfg.dt = 1e-3;
    cfg.params.mode = Mode::Double;
    cfg.params.p = 1.0;
    const TeamObjective bench = benchmark_objectives();
    cfg.team = TeamObjective({bench[1], bench[4], bench[7]});
    const std::vector<Edge> path = {{0, 1, 1}, {1, 2, 1}};
    cfg.schedule = TopologySchedule{{{0.0, ring(3)}, {0.5, Topology::from_edges(3, path)}}, 0.5};

    ProtocolState s = ProtocolState::zeros(3, 2, Mode::Double);
    s.x = support::random_matrix(rng, 3, 2, 5.0);
    s.v = support::random_matrix(rng, 3, 2, 1.0);
    TransformedState ts{s.x, transform_vbar(s.x, s.v, cfg.params.p), s.q};
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double t = k * cfg.dt;
        s = step(s, t, cfg);
        ts = step_transformed(ts, t, cfg);
        worst = std::max({worst, (s.x - ts.x).cwiseAbs().maxCoeff(),
                          (transform_vbar(s.x, s.v, cfg.params.p) - ts.vbar).cwiseAbs().maxCoeff()});
    }
    return {worst <= 1e-8, fmt("max deviation over 1000 steps %.3e", worst)};
}

Verdict criterion9(const GoldenRun& single, const GoldenRun& dbl) {
    const GoldenRun again = golden("benchmark_single");
    const bool same = support::same_record(single.record, again.record);
    const GoldenRun half = golden("benchmark_single", 0.5);
    const double shift = (mean_position(half.record) - mean_position(single.record)).norm();
    const GoldenRun half_double = golden("benchmark_double", 0.5);
    const double shift_double = (mean_position(half_double.record) - mean_position(dbl.record)).norm();
    const bool ok = same && shift < 1e-2 && shift_double < 1e-2;
    return {ok, std::string("identical records ") + (same ? "yes" : "no") +
                    fmt("; halving dt moves the consensus point by %.3e", shift) +
                    fmt(" (single), %.3e (double)", shift_double)};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const std::function<Verdict()>& check) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  criterion %d: %s\n", v.ok ? "PASS" : "FAIL", id, v.detail.c_str());
        std::fflush(stdout);
        failures += v.ok ? 0 : 1;
    };

    const GoldenRun single = golden("benchmark_single");
    const GoldenRun dbl = golden("benchmark_double");
    report(1, [&] { return criterion1(single); });
    report(2, [&] { return criterion2(dbl); });
    report(3, [&] { return criterion3(single, dbl); });
    report(4, [&] { return criterion4(single, dbl); });
    report(5, criterion5);
    report(6, criterion6);
    report(7, criterion7);
    report(8, criterion8);
    report(9, [&] { return criterion9(single, dbl); });
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
