#include "adaptopt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <utility>

#include "adaptopt/errors.hpp"
#include "adaptopt/random.hpp"
#include "strcat.hpp"

namespace adaptopt {

Topology Topology::from_edges(std::size_t n, std::span<const Edge> edges) {
    Topology g;
    g.n_ = n;
    g.weights_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    g.neighbors_.resize(n);

    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const Edge& e : edges) {
        if (e.i >= n || e.j >= n) {
            throw GraphError(cat("edge (", e.i, ", ", e.j, ") references a node outside [0, ", n, ")"));
        }
        if (e.i == e.j) throw GraphError(cat("self-loop at node ", e.i));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw GraphError(cat("edge (", e.i, ", ", e.j, ") has nonpositive weight ", e.weight));
        }
        const auto key = std::minmax(e.i, e.j);
        if (!seen.insert(key).second) {
            throw GraphError(cat("duplicate edge (", key.first, ", ", key.second, ")"));
        }
        const auto a = static_cast<Eigen::Index>(e.i);
        const auto b = static_cast<Eigen::Index>(e.j);
        g.weights_(a, b) = e.weight;
        g.weights_(b, a) = e.weight;
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (g.has_edge(i, j)) {
                g.neighbors_[i].push_back(j);
                if (i < j) g.edges_.push_back({i, j, g.weight(i, j)});
            }
        }
    }
    return g;
}

Topology Topology::empty(std::size_t n) { return from_edges(n, {}); }

Eigen::MatrixXd laplacian(const Topology& g) {
    Eigen::MatrixXd L = -g.weights();
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        // Rows of L sum to zero up to rounding; exactly when the partial sums of
        // the weights are representable (integer weights, for instance).
        double d = 0.0;
        for (Eigen::Index j = 0; j < L.cols(); ++j) d += g.weights()(i, j);
        L(i, i) = d;
    }
    return L;
}

namespace {

std::vector<std::size_t> component_labels(const Topology& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> label(n, n);
    std::size_t next = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (label[root] != n) continue;
        std::deque<std::size_t> queue{root};
        label[root] = next;
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t v : g.neighbors(u)) {
                if (label[v] == n) {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        ++next;
    }
    return label;
}

}  // namespace

std::size_t component_count(const Topology& g) {
    const auto labels = component_labels(g);
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

bool is_connected(const Topology& g) { return component_count(g) <= 1; }

Topology ring(std::size_t n) {
    std::vector<Edge> edges;
    if (n == 2) {
        edges.push_back({0, 1, 1.0});
    } else if (n > 2) {
        for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    }
    return Topology::from_edges(n, edges);
}

std::size_t TopologySchedule::segment_index(double t) const {
    if (!(t >= 0.0)) throw DomainError(cat("topology requested at negative time ", t));
    if (segments.empty()) throw DomainError("topology requested from an empty schedule");
    const auto it = std::upper_bound(segments.begin(), segments.end(), t,
                                     [](double value, const ScheduleSegment& s) { return value < s.start; });
    return it == segments.begin() ? 0 : static_cast<std::size_t>(it - segments.begin()) - 1;
}

const Topology& TopologySchedule::active_at(double t) const { return segments[segment_index(t)].topology; }

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Empty: return "empty";
        case ViolationKind::FirstStartNonzero: return "first_start_nonzero";
        case ViolationKind::UnorderedTimes: return "unordered_times";
        case ViolationKind::DwellTooShort: return "dwell_too_short";
        case ViolationKind::Disconnected: return "disconnected";
        case ViolationKind::SizeMismatch: return "size_mismatch";
    }
    return "unknown";
}

std::vector<ScheduleViolation> validate_schedule(const TopologySchedule& s) {
    std::vector<ScheduleViolation> out;
    if (s.segments.empty()) {
        out.push_back({ViolationKind::Empty, 0, "schedule has no segments"});
        return out;
    }
    if (s.segments.front().start != 0.0) {
        out.push_back({ViolationKind::FirstStartNonzero, 0,
                       cat("first segment starts at ", s.segments.front().start, ", expected 0")});
    }
    const std::size_t n = s.segments.front().topology.size();
    for (std::size_t k = 0; k < s.segments.size(); ++k) {
        const auto& seg = s.segments[k];
        if (seg.topology.size() != n) {
            out.push_back({ViolationKind::SizeMismatch, k,
                           cat("segment ", k, " has ", seg.topology.size(), " agents, expected ", n)});
        }
        if (!is_connected(seg.topology)) {
            out.push_back({ViolationKind::Disconnected, k, cat("segment ", k, " topology is not connected")});
        }
        if (k == 0) continue;
        const double prev = s.segments[k - 1].start;
        const double gap = seg.start - prev;
        if (!(gap > 0.0)) {
            out.push_back({ViolationKind::UnorderedTimes, k,
                           cat("segment ", k, " starts at ", seg.start, ", not after ", prev)});
        } else if (gap < s.dwell_min * (1.0 - 1e-12)) {
            // Relative slack absorbs rounding in start times built as k * dwell.
            out.push_back({ViolationKind::DwellTooShort, k,
                           cat("gap ", gap, " before segment ", k, " is below dwell_min ", s.dwell_min)});
        }
    }
    return out;
}

Topology random_connected_subgraph(const Topology& base, std::mt19937_64& rng) {
    const std::size_t n = base.size();
    if (!is_connected(base)) throw GraphError("base graph for subgraph sampling must be connected");
    if (n <= 1) return base;

    // Wilson's algorithm: loop-erased random walks rooted at node 0.
    std::vector<bool> in_tree(n, false);
    std::vector<std::size_t> next(n, n);
    in_tree[0] = true;
    for (std::size_t start = 1; start < n; ++start) {
        std::size_t u = start;
        while (!in_tree[u]) {
            const auto& nb = base.neighbors(u);
            next[u] = nb[uniform_index(rng, nb.size())];
            u = next[u];
        }
        u = start;
        while (!in_tree[u]) {
            in_tree[u] = true;
            u = next[u];
        }
    }

    std::vector<Edge> edges;
    for (const Edge& e : base.edges()) {
        const bool tree_edge = next[e.i] == e.j || next[e.j] == e.i;
        if (tree_edge || uniform01(rng) < 0.5) edges.push_back(e);
    }
    return Topology::from_edges(n, edges);
}

TopologySchedule random_connected_schedule(const Topology& base, double dwell, std::uint64_t seed, double horizon) {
    if (!(dwell > 0.0)) throw GraphError(cat("dwell must be positive, got ", dwell));
    std::mt19937_64 rng(seed);
    TopologySchedule s;
    s.dwell_min = dwell;
    for (std::size_t k = 0;; ++k) {
        const double start = static_cast<double>(k) * dwell;
        if (k > 0 && start > horizon) break;
        s.segments.push_back({start, random_connected_subgraph(base, rng)});
    }
    return s;
}

}  // namespace adaptopt
