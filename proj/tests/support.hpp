#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "adaptopt/config.hpp"
#include "adaptopt/engine.hpp"
#include "adaptopt/graph.hpp"
#include "adaptopt/objective.hpp"
#include "adaptopt/random.hpp"

namespace support {

using namespace adaptopt;

/// Erdos-Renyi style graph. Integer weights keep every row sum exact.
inline Topology random_graph(std::mt19937_64& rng, std::size_t n, double edge_prob, bool integer_weights = true) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (uniform01(rng) >= edge_prob) continue;
            const double w = integer_weights ? static_cast<double>(1 + uniform_index(rng, 5)) : uniform(rng, 0.05, 3.0);
            edges.push_back({i, j, w});
        }
    }
    return Topology::from_edges(n, edges);
}

/// Random member of the even-power family with every coordinate covered.
inline ObjectiveSpec random_objective(std::mt19937_64& rng, std::size_t m) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t count = 1 + uniform_index(rng, 2);
        for (std::size_t c = 0; c < count; ++c) {
            const int power = 2 * static_cast<int>(1 + uniform_index(rng, 3));
            terms.push_back({uniform(rng, 0.1, 2.0), k, uniform(rng, -3.0, 3.0), power});
        }
    }
    return ObjectiveSpec(m, std::move(terms));
}

inline Point random_point(std::mt19937_64& rng, std::size_t m, double half_width) {
    Point x(static_cast<Eigen::Index>(m));
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = uniform(rng, -half_width, half_width);
    return x;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double half_width) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = uniform(rng, -half_width, half_width);
    return a;
}

/// Symmetric nonnegative gains with zero diagonal.
inline Eigen::MatrixXd random_gains(std::mt19937_64& rng, std::size_t n, double max_gain) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < q.rows(); ++i)
        for (Eigen::Index j = i + 1; j < q.cols(); ++j) q(i, j) = q(j, i) = uniform(rng, 0.0, max_gain);
    return q;
}

inline TopologySchedule static_schedule(const Topology& g) { return TopologySchedule{{{0.0, g}}, 1.0}; }

inline SimConfig single_agent(const ObjectiveSpec& f, Mode mode, const Point& x0) {
    SimConfig cfg;
    cfg.params.mode = mode;
    cfg.team = TeamObjective({f});
    cfg.schedule = static_schedule(Topology::empty(1));
    cfg.initial.x = Eigen::MatrixXd(x0.transpose());
    return cfg;
}

inline bool same_record(const RunRecord& a, const RunRecord& b) {
    return a.mode == b.mode && a.times == b.times && a.steps == b.steps && a.segments == b.segments && a.x == b.x &&
           a.v == b.v && a.q == b.q && a.monitors == b.monitors;
}

}  // namespace support
