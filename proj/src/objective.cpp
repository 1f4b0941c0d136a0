#include "adaptopt/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adaptopt/errors.hpp"
#include "strcat.hpp"

namespace adaptopt {

namespace {

double ipow(double base, int exponent) {
    double r = 1.0;
    for (int k = 0; k < exponent; ++k) r *= base;
    return r;
}

void check_dimension(const ObjectiveSpec& f, const Point& x) {
    if (static_cast<std::size_t>(x.size()) != f.dimension()) {
        throw DomainError(cat("point has dimension ", x.size(), ", objective expects ", f.dimension()));
    }
}

}  // namespace

ObjectiveSpec::ObjectiveSpec(std::size_t dimension, std::vector<Term> terms)
    : dimension_(dimension), terms_(std::move(terms)) {
    if (dimension_ == 0) throw ObjectiveError("objective dimension must be at least 1");
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const Term& t = terms_[k];
        if (!(t.coefficient > 0.0) || !std::isfinite(t.coefficient)) {
            throw ObjectiveError(cat("term ", k, ": coefficient must be positive, got ", t.coefficient));
        }
        if (t.power < 2 || t.power % 2 != 0) {
            throw ObjectiveError(cat("term ", k, ": power must be an even integer >= 2, got ", t.power));
        }
        if (t.coordinate >= dimension_) {
            throw ObjectiveError(cat("term ", k, ": coordinate ", t.coordinate, " outside dimension ", dimension_));
        }
        if (!std::isfinite(t.shift)) throw ObjectiveError(cat("term ", k, ": shift must be finite"));
    }
}

double eval(const ObjectiveSpec& f, const Point& x) {
    check_dimension(f, x);
    double sum = 0.0;
    for (const Term& t : f.terms()) sum += t.coefficient * ipow(x[static_cast<Eigen::Index>(t.coordinate)] + t.shift, t.power);
    return sum;
}

Point grad(const ObjectiveSpec& f, const Point& x) {
    check_dimension(f, x);
    Point g = Point::Zero(x.size());
    for (const Term& t : f.terms()) {
        const auto k = static_cast<Eigen::Index>(t.coordinate);
        g[k] += t.coefficient * t.power * ipow(x[k] + t.shift, t.power - 1);
    }
    return g;
}

Point hessian_diagonal(const ObjectiveSpec& f, const Point& x) {
    check_dimension(f, x);
    Point h = Point::Zero(x.size());
    for (const Term& t : f.terms()) {
        const auto k = static_cast<Eigen::Index>(t.coordinate);
        h[k] += t.coefficient * t.power * (t.power - 1) * ipow(x[k] + t.shift, t.power - 2);
    }
    return h;
}

Point grad_fd(const ObjectiveSpec& f, const Point& x, double h) {
    if (!(h > 0.0)) throw DomainError(cat("finite-difference step must be positive, got ", h));
    check_dimension(f, x);
    Point g(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        Point up = x;
        Point down = x;
        up[k] += h;
        down[k] -= h;
        g[k] = (eval(f, up) - eval(f, down)) / (2.0 * h);
    }
    return g;
}

bool Box::contains(const Point& p, double slack) const {
    return ((p - lower).array() >= -slack).all() && ((upper - p).array() >= -slack).all();
}

Box local_minimizer_set_bound(const ObjectiveSpec& f) {
    const auto m = static_cast<Eigen::Index>(f.dimension());
    constexpr double inf = std::numeric_limits<double>::infinity();
    Box box{Point::Constant(m, inf), Point::Constant(m, -inf)};
    // The partial derivative along k is a sum of nondecreasing functions, each
    // vanishing at its own -shift, so its zero set lies between the extremes.
    for (const Term& t : f.terms()) {
        const auto k = static_cast<Eigen::Index>(t.coordinate);
        box.lower[k] = std::min(box.lower[k], -t.shift);
        box.upper[k] = std::max(box.upper[k], -t.shift);
    }
    std::vector<std::size_t> flat;
    for (Eigen::Index k = 0; k < m; ++k) {
        if (box.lower[k] > box.upper[k]) flat.push_back(static_cast<std::size_t>(k));
    }
    if (!flat.empty()) {
        std::string list;
        for (std::size_t k : flat) list += (list.empty() ? "" : ", ") + std::to_string(k);
        throw AssumptionViolation(cat("minimizer set is unbounded: no term on coordinate(s) ", list), flat);
    }
    return box;
}

TeamObjective::TeamObjective(std::vector<ObjectiveSpec> members) : members_(std::move(members)) {
    if (members_.empty()) throw ObjectiveError("team objective needs at least one member");
    for (std::size_t i = 1; i < members_.size(); ++i) {
        if (members_[i].dimension() != members_[0].dimension()) {
            throw ObjectiveError(cat("member ", i, " has dimension ", members_[i].dimension(), ", member 0 has ",
                                     members_[0].dimension()));
        }
    }
}

double team_eval(const TeamObjective& team, const Point& s) {
    double sum = 0.0;
    for (const auto& f : team.members()) sum += eval(f, s);
    return sum;
}

Point team_grad(const TeamObjective& team, const Point& s) {
    Point g = Point::Zero(s.size());
    for (const auto& f : team.members()) g += grad(f, s);
    return g;
}

namespace {

Point team_hessian_diagonal(const TeamObjective& team, const Point& s) {
    Point h = Point::Zero(s.size());
    for (const auto& f : team.members()) h += hessian_diagonal(f, s);
    return h;
}

}  // namespace

Point minimizer_team(const TeamObjective& team, double tol, const MinimizerOptions& options) {
    const auto m = static_cast<Eigen::Index>(team.dimension());
    Point x = Point::Zero(m);
    Point counts = Point::Zero(m);
    for (const auto& f : team.members()) {
        for (const Term& t : f.terms()) {
            x[static_cast<Eigen::Index>(t.coordinate)] -= t.shift;
            counts[static_cast<Eigen::Index>(t.coordinate)] += 1.0;
        }
    }
    for (Eigen::Index k = 0; k < m; ++k) {
        if (counts[k] == 0.0) {
            throw AssumptionViolation(cat("team objective is flat along coordinate ", k), {static_cast<std::size_t>(k)});
        }
        x[k] /= counts[k];
    }

    Point g = team_grad(team, x);
    double value = team_eval(team, x);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (g.norm() <= tol) return x;
        Point h = team_hessian_diagonal(team, x);
        Point direction(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            // Quartic-only coordinates have zero curvature at their own minimizer.
            direction[k] = h[k] > 0.0 ? -g[k] / h[k] : -g[k];
        }
        const double slope = g.dot(direction);
        // Below this predicted decrease the objective cannot resolve progress, so
        // a step is judged by the gradient norm instead.
        const double noise = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(value));
        double alpha = 1.0;
        Point trial = x + direction;
        double trial_value = team_eval(team, trial);
        Point trial_grad = team_grad(team, trial);
        auto acceptable = [&] {
            if (trial_value <= value + options.armijo * alpha * slope) return true;
            return -alpha * slope <= noise && trial_grad.norm() < g.norm();
        };
        while (!acceptable()) {
            alpha *= 0.5;
            if (alpha < 1e-20) throw MinimizerError("line search stalled", x, g.norm());
            trial = x + alpha * direction;
            trial_value = team_eval(team, trial);
            trial_grad = team_grad(team, trial);
        }
        x = std::move(trial);
        value = trial_value;
        g = std::move(trial_grad);
    }
    if (g.norm() <= tol) return x;
    throw MinimizerError(cat("no convergence in ", options.max_iterations, " iterations, |grad| = ", g.norm()), x,
                         g.norm());
}

TeamObjective benchmark_objectives() {
    auto quad = [](double sx, double sy) {
        return ObjectiveSpec(2, {{0.5, 0, sx, 2}, {0.5, 1, sy, 2}});
    };
    auto quart = [](double sx, double sy) {
        return ObjectiveSpec(2, {{0.25, 0, sx, 4}, {0.25, 1, sy, 4}});
    };
    return TeamObjective({quad(0, 0), quad(2, 0), quad(0, 2), quad(2, 2), quart(0, 0), quart(2, 0), quart(0, 2),
                          quart(2, 2)});
}

}  // namespace adaptopt
