#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace adaptopt {

using Point = Eigen::VectorXd;

/// coefficient * (x[coordinate] + shift)^power, with coefficient > 0 and even power >= 2.
struct Term {
    double coefficient = 1.0;
    std::size_t coordinate = 0;
    double shift = 0.0;
    int power = 2;
};

class ObjectiveError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when X_i = {s : grad f_i(s) = 0} is unbounded, i.e. some coordinate
/// carries no term and the function is flat along it.
class AssumptionViolation : public std::runtime_error {
public:
    AssumptionViolation(std::string what, std::vector<std::size_t> flat)
        : std::runtime_error(std::move(what)), flat_coordinates(std::move(flat)) {}
    std::vector<std::size_t> flat_coordinates;
};

/// Local convex objective: a sum of shifted even-power terms. Every term is
/// convex and C^1, so the sum is too.
class ObjectiveSpec {
public:
    ObjectiveSpec() = default;
    ObjectiveSpec(std::size_t dimension, std::vector<Term> terms);

    std::size_t dimension() const { return dimension_; }
    const std::vector<Term>& terms() const { return terms_; }

private:
    std::size_t dimension_ = 0;
    std::vector<Term> terms_;
};

double eval(const ObjectiveSpec& f, const Point& x);
Point grad(const ObjectiveSpec& f, const Point& x);
/// The Hessian is diagonal for this family (each term touches one coordinate).
Point hessian_diagonal(const ObjectiveSpec& f, const Point& x);

/// Central differences, O(h^2).
Point grad_fd(const ObjectiveSpec& f, const Point& x, double h);

struct Box {
    Point lower;
    Point upper;
    bool contains(const Point& p, double slack = 0.0) const;
};

/// Axis-aligned box containing X_i. Throws AssumptionViolation when a
/// coordinate has no term.
Box local_minimizer_set_bound(const ObjectiveSpec& f);

class TeamObjective {
public:
    TeamObjective() = default;
    explicit TeamObjective(std::vector<ObjectiveSpec> members);

    std::size_t size() const { return members_.size(); }
    std::size_t dimension() const { return members_.front().dimension(); }
    const ObjectiveSpec& operator[](std::size_t i) const { return members_[i]; }
    const std::vector<ObjectiveSpec>& members() const { return members_; }

private:
    std::vector<ObjectiveSpec> members_;
};

double team_eval(const TeamObjective& team, const Point& s);
Point team_grad(const TeamObjective& team, const Point& s);

class MinimizerError : public std::runtime_error {
public:
    MinimizerError(std::string what, Point last, double grad_norm)
        : std::runtime_error(std::move(what)), last_iterate(std::move(last)), gradient_norm(grad_norm) {}
    Point last_iterate;
    double gradient_norm;
};

struct MinimizerOptions {
    int max_iterations = 100;
    double armijo = 1e-4;
};

/// Damped Newton on the team objective, started from the mean of the members'
/// -shift points. Returns s with ||team_grad(s)|| <= tol.
Point minimizer_team(const TeamObjective& team, double tol, const MinimizerOptions& options = {});

/// The eight planar objectives of the reference experiment; team minimizer (-1, -1).
TeamObjective benchmark_objectives();

}  // namespace adaptopt
