#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "adaptopt/csv.hpp"
#include "adaptopt/experiment.hpp"
#include "adaptopt/monitor.hpp"
#include "adaptopt/plot.hpp"

namespace py = pybind11;
using namespace adaptopt;

namespace {

using Triple = std::tuple<std::size_t, std::size_t, double>;
using Quad = std::tuple<double, std::size_t, double, int>;

Topology topology_from(std::size_t n, const std::vector<Triple>& triples) {
    std::vector<Edge> edges;
    for (const auto& [i, j, w] : triples) edges.push_back({i, j, w});
    return Topology::from_edges(n, edges);
}

ObjectiveSpec objective_from(std::size_t m, const std::vector<Quad>& quads) {
    std::vector<Term> terms;
    for (const auto& [c, k, s, p] : quads) terms.push_back({c, k, s, p});
    return ObjectiveSpec(m, std::move(terms));
}

/// Stacks per-sample matrices into a (samples, rows, cols) array.
py::array_t<double> stack(const std::vector<Eigen::MatrixXd>& mats) {
    const std::size_t s = mats.size();
    const std::size_t r = s ? static_cast<std::size_t>(mats.front().rows()) : 0;
    const std::size_t c = s ? static_cast<std::size_t>(mats.front().cols()) : 0;
    py::array_t<double> out({s, r, c});
    auto a = out.mutable_unchecked<3>();
    for (std::size_t k = 0; k < s; ++k)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                a(static_cast<py::ssize_t>(k), static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) =
                    mats[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

py::dict monitors_dict(const RunRecord& r) {
    auto column = [&](double MonitorSample::*field) {
        py::array_t<double> out(static_cast<py::ssize_t>(r.monitors.size()));
        auto a = out.mutable_unchecked<1>();
        for (std::size_t k = 0; k < r.monitors.size(); ++k) a(static_cast<py::ssize_t>(k)) = r.monitors[k].*field;
        return out;
    };
    py::dict d;
    d["t"] = column(&MonitorSample::t);
    d["V"] = column(&MonitorSample::V);
    d["V1"] = column(&MonitorSample::V1);
    d["diameter"] = column(&MonitorSample::diameter);
    d["team_value_at_mean"] = column(&MonitorSample::team_value_at_mean);
    d["grad_sum_norm"] = column(&MonitorSample::grad_sum_norm);
    d["max_gain"] = column(&MonitorSample::max_gain);
    d["max_speed"] = column(&MonitorSample::max_speed);
    d["interaction_dissipation"] = column(&MonitorSample::interaction_dissipation);
    return d;
}

py::dict summary_dict(const Summary& s) {
    py::dict d;
    d["final_point"] = s.final_point;
    d["minimizer"] = s.minimizer;
    d["distance_to_minimizer"] = s.distance_to_minimizer;
    d["worst_agent_distance"] = s.worst_agent_distance;
    d["final_team_value"] = s.final_team_value;
    d["final_diameter"] = s.final_diameter;
    d["consensus_time"] = s.consensus_time ? py::object(py::float_(*s.consensus_time)) : py::object(py::none());
    d["consensus_threshold"] = s.consensus_threshold;
    d["max_gain"] = s.max_gain;
    d["max_speed_final"] = s.max_speed_final;
    py::list checks;
    for (const auto& c : s.checks) {
        py::dict item;
        item["name"] = c.name;
        item["passed"] = c.passed;
        item["detail"] = c.detail;
        checks.append(item);
    }
    d["checks"] = checks;
    d["passed"] = s.passed();
    d["exit_code"] = s.exit_code();
    return d;
}

}  // namespace

PYBIND11_MODULE(_adaptopt, m) {
    m.doc() = "Adaptive distributed optimization over switching undirected graphs";

    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
    static py::exception<NumericError> numeric_error(m, "NumericError", PyExc_ArithmeticError);
    static py::exception<AssumptionViolation> assumption_error(m, "AssumptionViolation", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            std::string msg = e.what();
            for (const auto& problem : e.problems) msg += "\n  - " + problem;
            py::set_error(config_error, msg.c_str());
        } catch (const ParseError& e) {
            py::set_error(parse_error, e.what());
        } catch (const NumericError& e) {
            py::set_error(numeric_error, e.what());
        } catch (const AssumptionViolation& e) {
            py::set_error(assumption_error, e.what());
        }
    });

    py::enum_<Mode>(m, "Mode").value("single", Mode::Single).value("double", Mode::Double);

    py::class_<Topology>(m, "Topology")
        .def(py::init(&topology_from), py::arg("n"), py::arg("edges"),
             "Undirected weighted graph on n nodes from (i, j, weight) triples.")
        .def_property_readonly("size", &Topology::size)
        .def_property_readonly("weights", &Topology::weights)
        .def_property_readonly("edges",
                               [](const Topology& g) {
                                   std::vector<Triple> out;
                                   for (const Edge& e : g.edges()) out.emplace_back(e.i, e.j, e.weight);
                                   return out;
                               })
        .def("neighbors", &Topology::neighbors)
        .def(py::self == py::self);
    m.def("laplacian", &laplacian);
    m.def("is_connected", &is_connected);
    m.def("component_count", &component_count);
    m.def("ring", &ring, py::arg("n"));

    py::class_<ObjectiveSpec>(m, "Objective")
        .def(py::init(&objective_from), py::arg("dimension"), py::arg("terms"),
             "Sum of c * (x[k] + shift)**p over (c, k, shift, p) terms.")
        .def_property_readonly("dimension", &ObjectiveSpec::dimension)
        .def("__call__", [](const ObjectiveSpec& f, const Point& x) { return eval(f, x); })
        .def("grad", [](const ObjectiveSpec& f, const Point& x) { return grad(f, x); })
        .def("grad_fd", [](const ObjectiveSpec& f, const Point& x, double h) { return grad_fd(f, x, h); },
             py::arg("x"), py::arg("h") = 1e-5);

    py::class_<TeamObjective>(m, "TeamObjective")
        .def(py::init<std::vector<ObjectiveSpec>>(), py::arg("members"))
        .def("__len__", &TeamObjective::size)
        .def("__getitem__", [](const TeamObjective& t, std::size_t i) {
            if (i >= t.size()) throw py::index_error();
            return t[i];
        })
        .def("__call__", [](const TeamObjective& t, const Point& s) { return team_eval(t, s); })
        .def("grad", [](const TeamObjective& t, const Point& s) { return team_grad(t, s); })
        .def("minimizer", [](const TeamObjective& t, double tol) { return minimizer_team(t, tol); },
             py::arg("tol") = 1e-10);
    m.def("benchmark_objectives", &benchmark_objectives,
          "The eight planar objectives of the reference experiment (team minimizer (-1, -1)).");

    m.def("norm_dir", &norm_dir, py::arg("d"), py::arg("eps_norm"));
    m.def("transform_vbar", py::overload_cast<const Point&, const Point&, double>(&transform_vbar), py::arg("x"),
          py::arg("v"), py::arg("p"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readonly("preset", &ExperimentConfig::preset)
        .def_readonly("mode", &ExperimentConfig::mode)
        .def_readwrite("dt", &ExperimentConfig::dt)
        .def_readwrite("t_end", &ExperimentConfig::t_end)
        .def_readwrite("sample_every", &ExperimentConfig::sample_every)
        .def_readwrite("plots", &ExperimentConfig::plots)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir)
        .def_property_readonly("agents", &ExperimentConfig::agents)
        .def("set", &set_parameter, py::arg("key"), py::arg("value"),
             "Set seed, dt, t_end, p, eps_norm, eps_sign, sample_every, dwell or box.")
        .def("to_json", &to_json);
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_preset", &load_preset, py::arg("name"));
    m.def("preset_names", &preset_names);

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("mode", &RunRecord::mode)
        .def_property_readonly("times", [](const RunRecord& r) { return py::array(py::cast(r.times)); })
        .def_property_readonly("x", [](const RunRecord& r) { return stack(r.x); })
        .def_property_readonly("v", [](const RunRecord& r) { return stack(r.v); })
        .def_property_readonly("q", [](const RunRecord& r) { return stack(r.q); })
        .def_property_readonly("monitors", &monitors_dict)
        .def("__len__", &RunRecord::size);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("record", &ExperimentResult::record)
        .def_property_readonly("summary", [](const ExperimentResult& r) { return summary_dict(r.summary); })
        .def_property_readonly("report", [](const ExperimentResult& r) { return format_summary(r.summary); });

    m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("write_files") = false,
          py::call_guard<py::gil_scoped_release>(),
          "Run, annotate and check one experiment; optionally write CSV/JSON/SVG outputs to config.out_dir.");
    m.def("read_csv", &read_csv, py::arg("path"));
    m.def("trajectory_svg", &trajectory_svg);
    m.def("monitor_svg", &monitor_svg);
}
