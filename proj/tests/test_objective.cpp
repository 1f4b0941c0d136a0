#include <doctest.h>

#include "adaptopt/errors.hpp"
#include "support.hpp"

using namespace adaptopt;

namespace {

Point pt(double a, double b) { return Point{{a, b}}; }

const TeamObjective bench = benchmark_objectives();

/// Coordinate k of the team minimizer by bisection on the (monotone) summed
/// derivative. Independent of the library's Newton solver.
double bisect_coordinate(const TeamObjective& team, std::size_t k) {
    auto derivative = [&](double s) {
        double d = 0.0;
        for (const auto& f : team.members())
            for (const Term& t : f.terms())
                if (t.coordinate == k) d += t.coefficient * t.power * std::pow(s + t.shift, t.power - 1);
        return d;
    };
    double lo = -100.0;
    double hi = 100.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (derivative(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("eval examples") {
    CHECK(eval(bench[0], pt(0, 0)) == 0.0);
    CHECK(eval(bench[1], pt(-1, -1)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval(bench[4], pt(-1, -1)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(eval(bench[0], Point::Zero(3)), DomainError);
}

TEST_CASE("grad examples") {
    CHECK(grad(bench[1], pt(0, 0)) == pt(2, 0));
    CHECK(grad(bench[0], pt(0, 0)) == pt(0, 0));
    CHECK(grad(bench[5], pt(-1, -1)) == pt(1, -1));
    CHECK_THROWS_AS(grad(bench[0], Point::Zero(1)), DomainError);
}

TEST_CASE("finite-difference gradient examples") {
    CHECK((grad_fd(bench[1], pt(0, 0), 1e-5) - pt(2, 0)).norm() <= 1e-6);
    for (double h : {1e-1, 1e-3, 1e-7}) CHECK(grad_fd(bench[0], pt(0, 0), h) == pt(0, 0));
    CHECK((grad_fd(bench[4], pt(1, 1), 1e-4) - pt(1, 1)).norm() <= 1e-6);
    CHECK_THROWS_AS(grad_fd(bench[0], pt(0, 0), 0.0), DomainError);
    CHECK_THROWS_AS(grad_fd(bench[0], Point::Zero(3), 1e-5), DomainError);
}

TEST_CASE("objective term validation") {
    CHECK_THROWS_AS(ObjectiveSpec(2, {{1.0, 0, 0.0, 3}}), ObjectiveError);
    CHECK_THROWS_AS(ObjectiveSpec(2, {{1.0, 0, 0.0, 0}}), ObjectiveError);
    CHECK_THROWS_AS(ObjectiveSpec(2, {{0.0, 0, 0.0, 2}}), ObjectiveError);
    CHECK_THROWS_AS(ObjectiveSpec(2, {{-1.0, 0, 0.0, 2}}), ObjectiveError);
    CHECK_THROWS_AS(ObjectiveSpec(2, {{1.0, 2, 0.0, 2}}), ObjectiveError);
    CHECK_THROWS_AS(TeamObjective(std::vector<ObjectiveSpec>{}), ObjectiveError);
    CHECK_THROWS_AS(TeamObjective({ObjectiveSpec(2, {{1, 0, 0, 2}}), ObjectiveSpec(1, {{1, 0, 0, 2}})}), ObjectiveError);
}

TEST_CASE("convexity on random tuples") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + uniform_index(rng, 4);
        const ObjectiveSpec f = support::random_objective(rng, m);
        const Point x = support::random_point(rng, m, 4.0);
        const Point y = support::random_point(rng, m, 4.0);
        const double lambda = uniform01(rng);
        const double lhs = eval(f, lambda * x + (1.0 - lambda) * y);
        const double rhs = lambda * eval(f, x) + (1.0 - lambda) * eval(f, y);
        CAPTURE(trial);
        CHECK(lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("gradient inequality on random pairs") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + uniform_index(rng, 4);
        const ObjectiveSpec f = support::random_objective(rng, m);
        const Point x = support::random_point(rng, m, 4.0);
        const Point z = support::random_point(rng, m, 4.0);
        const double lhs = grad(f, x).dot(z - x);
        const double rhs = eval(f, z) - eval(f, x);
        CAPTURE(trial);
        CHECK(lhs <= rhs + 1e-12 * std::max({1.0, std::abs(eval(f, z)), std::abs(eval(f, x))}));
    }
}

TEST_CASE("analytic gradient matches central differences") {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + uniform_index(rng, 4);
        const ObjectiveSpec f = support::random_objective(rng, m);
        const Point x = support::random_point(rng, m, 4.0);
        const Point g = grad(f, x);
        CAPTURE(trial);
        CHECK((g - grad_fd(f, x, 1e-5)).norm() <= 1e-5 * std::max(1.0, g.norm()));
    }
}

TEST_CASE("hessian diagonal matches differences of the gradient") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + uniform_index(rng, 3);
        const ObjectiveSpec f = support::random_objective(rng, m);
        const Point x = support::random_point(rng, m, 3.0);
        const Point h = hessian_diagonal(f, x);
        for (std::size_t k = 0; k < m; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            Point e = Point::Zero(static_cast<Eigen::Index>(m));
            e[kk] = 1e-5;
            const double fd = (grad(f, x + e)[kk] - grad(f, x - e)[kk]) / 2e-5;
            CHECK(std::abs(h[kk] - fd) <= 1e-5 * std::max(1.0, std::abs(h[kk])));
        }
    }
}

TEST_CASE("team objective examples") {
    CHECK(team_grad(bench, pt(-1, -1)).norm() == 0.0);
    CHECK(team_eval(bench, pt(-1, -1)) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(team_eval(TeamObjective({bench[0]}), pt(3, 4)) == doctest::Approx(12.5).epsilon(1e-15));
    CHECK_THROWS_AS(team_eval(bench, Point::Zero(3)), DomainError);
    CHECK_THROWS_AS(team_grad(bench, Point::Zero(1)), DomainError);
}

TEST_CASE("minimizer examples") {
    CHECK((minimizer_team(bench, 1e-8) - pt(-1, -1)).norm() <= 1e-6);
    CHECK(minimizer_team(bench, 1e-12).isApprox(pt(-1, -1), 1e-12));
    CHECK(minimizer_team(TeamObjective({bench[0]}), 1e-12).norm() <= 1e-12);
    CHECK((minimizer_team(TeamObjective({bench[0], bench[1]}), 1e-12) - pt(-1, 0)).norm() <= 1e-12);
}

TEST_CASE("minimizer agrees with bisection oracle on random teams") {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 1 + uniform_index(rng, 3);
        const std::size_t n = 1 + uniform_index(rng, 8);
        std::vector<ObjectiveSpec> members;
        for (std::size_t i = 0; i < n; ++i) members.push_back(support::random_objective(rng, m));
        const TeamObjective team(members);
        const Point s = minimizer_team(team, 1e-10);
        CAPTURE(trial);
        CHECK(team_grad(team, s).norm() <= 1e-10);
        for (std::size_t k = 0; k < m; ++k) {
            CHECK(std::abs(s[static_cast<Eigen::Index>(k)] - bisect_coordinate(team, k)) <= 1e-6);
        }
        // First-order optimality: no probe point does better.
        for (int probe = 0; probe < 100; ++probe) {
            const Point z = support::random_point(rng, m, 5.0);
            CHECK(team_eval(team, s) <= team_eval(team, z) + 1e-8);
        }
    }
}

TEST_CASE("minimizer reports non-convergence with its last iterate") {
    MinimizerOptions tight;
    tight.max_iterations = 1;
    // The starting point (mean of -shift) is not stationary for this pair.
    const TeamObjective lopsided({ObjectiveSpec(1, {{0.5, 0, 0.0, 2}}), ObjectiveSpec(1, {{1.0, 0, 2.0, 4}})});
    try {
        minimizer_team(lopsided, 1e-14, tight);
        FAIL("expected MinimizerError");
    } catch (const MinimizerError& e) {
        CHECK(e.last_iterate.size() == 1);
        CHECK(e.gradient_norm > 1e-14);
        CHECK(e.gradient_norm == doctest::Approx(team_grad(lopsided, e.last_iterate).norm()));
    }
}

TEST_CASE("local minimizer set bounds") {
    const Box b4 = local_minimizer_set_bound(bench[3]);
    CHECK(b4.lower == pt(-2, -2));
    CHECK(b4.upper == pt(-2, -2));
    const Box b1 = local_minimizer_set_bound(bench[0]);
    CHECK(b1.lower == pt(0, 0));
    CHECK(b1.upper == pt(0, 0));
    CHECK(b1.contains(pt(0, 0)));
    CHECK_FALSE(b1.contains(pt(0.1, 0)));
    CHECK(b1.contains(pt(0.1, 0), 0.2));

    try {
        local_minimizer_set_bound(ObjectiveSpec(2, {{1.0, 0, 0.0, 2}}));
        FAIL("expected AssumptionViolation");
    } catch (const AssumptionViolation& e) {
        CHECK(e.flat_coordinates == std::vector<std::size_t>{1});
    }

    // Every gradient zero lies inside the box.
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 1 + uniform_index(rng, 3);
        const ObjectiveSpec f = support::random_objective(rng, m);
        const Box box = local_minimizer_set_bound(f);
        const Point s = minimizer_team(TeamObjective({f}), 1e-12);
        CHECK(box.contains(s, 1e-9));
    }
}
