#include <doctest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "adaptopt/csv.hpp"
#include "adaptopt/monitor.hpp"
#include "adaptopt/plot.hpp"
#include "support.hpp"

using namespace adaptopt;

namespace {

RunRecord annotated_run(Mode mode, double t_end) {
    ExperimentConfig e = load_preset(mode == Mode::Single ? "benchmark_single" : "benchmark_double");
    e.t_end = t_end;
    const SimConfig cfg = e.to_sim_config();
    RunRecord r = run(cfg);
    annotate(r, cfg.team, cfg.params, cfg.schedule);
    return r;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    for (std::string line; std::getline(ss, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("csv column schema") {
    CHECK(csv_columns(8, 2, Mode::Single).size() == 1 + 16 + 28 + 9);
    CHECK(csv_columns(8, 2, Mode::Double).size() == 1 + 32 + 28 + 9);
    const auto cols = csv_columns(2, 1, Mode::Double);
    const std::vector<std::string> head = {"t", "x0_0", "x1_0", "v0_0", "v1_0", "q0_1"};
    CHECK(std::vector<std::string>(cols.begin(), cols.begin() + 6) == head);
}

TEST_CASE("csv rows") {
    SimConfig cfg = support::single_agent(ObjectiveSpec(2, {{0.5, 0, 0.0, 2}, {0.5, 1, 0.0, 2}}), Mode::Single,
                                          Point{{1.0, 2.0}});
    cfg.dt = 0.1;
    cfg.t_end = 0.1;
    RunRecord r = run(cfg);
    annotate(r, cfg.team, cfg.params, cfg.schedule);
    const auto text = lines(to_csv(r));
    CHECK(text.size() == 3);

    const RunRecord big = annotated_run(Mode::Single, 1.0);
    const auto rows = lines(to_csv(big));
    CHECK(rows.size() == big.size() + 1);
    for (const auto& row : rows) CHECK(count(row, ",") == 53);

    RunRecord bare = run(cfg);
    CHECK_THROWS_AS(to_csv(bare), IoError);
}

TEST_CASE("csv round-trips every numeric field exactly") {
    for (Mode mode : {Mode::Single, Mode::Double}) {
        const RunRecord r = annotated_run(mode, 1.0);
        const RunRecord back = parse_csv(to_csv(r));
        CHECK(back.mode == r.mode);
        CHECK(back.times == r.times);
        CHECK(back.x == r.x);
        CHECK(back.v == r.v);
        CHECK(back.q == r.q);
        CHECK(back.monitors == r.monitors);
    }
    const auto path = std::filesystem::temp_directory_path() / "adaptopt_test_io.csv";
    const RunRecord r = annotated_run(Mode::Double, 0.2);
    write_csv(r, path);
    CHECK(read_csv(path).monitors == r.monitors);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_csv(path), IoError);
    CHECK_THROWS_AS(parse_csv("t,bogus\n0,1\n"), IoError);
}

TEST_CASE("trajectory plot has one trace per agent and coordinate") {
    const RunRecord r = annotated_run(Mode::Single, 30.0);
    const std::string svg = trajectory_svg(r);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count(svg, "class=\"trace\"") == 16);

    // Traces converge: every trace ends on the same pixel row, up to half a pixel.
    const std::regex trace(R"re(data-agent="\d+" data-coord="\d+"[^>]*points="([^"]*)")re");
    std::vector<double> ends;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), trace); it != std::sregex_iterator(); ++it) {
        const std::string pts = (*it)[1];
        const auto last = pts.substr(pts.rfind(' ') + 1);
        ends.push_back(std::stod(last.substr(last.find(',') + 1)));
    }
    REQUIRE(ends.size() == 16);
    for (double y : ends) CHECK(std::abs(y - ends.front()) <= 0.5);
}

TEST_CASE("monitor plot") {
    const RunRecord r = annotated_run(Mode::Double, 1.0);
    const std::string svg = monitor_svg(r);
    for (const char* series : {"\"V\"", "\"V1\"", "\"diameter\"", "\"max_gain\""})
        CHECK(svg.find(std::string("data-series=") + series) != std::string::npos);
    RunRecord bare = r;
    bare.monitors.clear();
    CHECK_THROWS_AS(monitor_svg(bare), IoError);
}

TEST_CASE("plots are deterministic and refuse empty records") {
    const RunRecord r = annotated_run(Mode::Single, 1.0);
    const auto dir = std::filesystem::temp_directory_path() / "adaptopt_test_plots";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir / "a");
    std::filesystem::create_directories(dir / "b");
    const PlotFiles a = render_plots(r, dir / "a");
    const PlotFiles b = render_plots(annotated_run(Mode::Single, 1.0), dir / "b");
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
    };
    CHECK(!slurp(a.trajectories).empty());
    CHECK(slurp(a.trajectories) == slurp(b.trajectories));
    CHECK(slurp(a.monitors) == slurp(b.monitors));
    std::filesystem::remove_all(dir);

    try {
        render_plots(RunRecord{}, dir);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("nothing to plot") != std::string::npos);
    }
    CHECK_FALSE(std::filesystem::exists(dir));
}
