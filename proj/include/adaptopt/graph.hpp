#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace adaptopt {

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 1.0;
};

/// Weighted undirected graph on `n` agents. Immutable once built; the only way
/// in is `from_edges`, which enforces symmetry, zero diagonal and positive weights.
class Topology {
public:
    Topology() = default;

    static Topology from_edges(std::size_t n, std::span<const Edge> edges);
    static Topology empty(std::size_t n);

    std::size_t size() const { return n_; }
    const Eigen::MatrixXd& weights() const { return weights_; }
    double weight(std::size_t i, std::size_t j) const { return weights_(i, j); }
    bool has_edge(std::size_t i, std::size_t j) const { return weights_(i, j) > 0.0; }

    /// Edges with i < j, in lexicographic order.
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_[i]; }

    friend bool operator==(const Topology& a, const Topology& b) {
        return a.n_ == b.n_ && a.weights_ == b.weights_;
    }

private:
    std::size_t n_ = 0;
    Eigen::MatrixXd weights_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> neighbors_;
};

Eigen::MatrixXd laplacian(const Topology& g);

/// Breadth-first search from node 0.
bool is_connected(const Topology& g);

std::size_t component_count(const Topology& g);

/// Undirected ring 0-1-...-(n-1)-0 with unit weights.
Topology ring(std::size_t n);

struct ScheduleSegment {
    double start = 0.0;
    Topology topology;
};

/// Piecewise-constant topology signal. The last segment extends to +infinity.
struct TopologySchedule {
    std::vector<ScheduleSegment> segments;
    double dwell_min = 0.0;

    /// Index of the segment active at t (right-continuous at switch times).
    std::size_t segment_index(double t) const;
    const Topology& active_at(double t) const;
};

enum class ViolationKind { Empty, FirstStartNonzero, UnorderedTimes, DwellTooShort, Disconnected, SizeMismatch };

struct ScheduleViolation {
    ViolationKind kind;
    std::size_t segment;
    std::string message;
};

std::string to_string(ViolationKind kind);

std::vector<ScheduleViolation> validate_schedule(const TopologySchedule& s);

/// Connected spanning subgraph of `base`: a uniformly random spanning tree
/// (Wilson's algorithm) plus every remaining base edge with probability 1/2.
Topology random_connected_subgraph(const Topology& base, std::mt19937_64& rng);

/// Segments at 0, dwell, 2*dwell, ... covering [0, horizon], each an
/// independent draw of `random_connected_subgraph(base)`.
TopologySchedule random_connected_schedule(const Topology& base, double dwell, std::uint64_t seed, double horizon);

}  // namespace adaptopt
