#include <doctest.h>

#include <cmath>

#include "cvop/scalarization.hpp"
#include "support.hpp"

using namespace cvop;
using namespace cvop::testing;

namespace {

ProblemSpec parabola() { return load_problem(fixture("parabola.prob")); }

ProblemSpec one_constraint(const std::string& g) {
    return parse_problem("vars 2\nobjective x1\nobjective x2\nconstraint " + g +
                         "\ncone generator 1 0\ncone generator 0 1\n");
}

bool in_dual_cone(const ProblemSpec& spec, const Vec& w, double tol) {
    for (const auto& r : spec.cone.R)
        if (w.dot(r) < -tol) return false;
    return true;
}

}  // namespace

TEST_CASE("feasibility phase") {
    const auto p = parabola();
    const auto f = check_feasibility(p, SolverOptions{});
    REQUIRE(f.status == FeasibilityStatus::StrictlyFeasible);
    CHECK((f.x0(0) - 1.0) * (f.x0(0) - 1.0) < f.x0(1));

    auto fresh = p;
    fresh.start.reset();
    const auto g = check_feasibility(fresh, SolverOptions{});
    REQUIRE(g.status == FeasibilityStatus::StrictlyFeasible);
    CHECK((g.x0(0) - 1.0) * (g.x0(0) - 1.0) < g.x0(1));

    CHECK(check_feasibility(one_constraint("sqr(x1) + 1"), SolverOptions{}).status == FeasibilityStatus::Infeasible);
    CHECK(check_feasibility(load_problem(fixture("infeasible.prob")), SolverOptions{}).status ==
          FeasibilityStatus::Infeasible);
    CHECK(check_feasibility(one_constraint("sqr(x1)"), SolverOptions{}).status == FeasibilityStatus::SlaterFailure);
    CHECK(check_feasibility(load_problem(fixture("slater.prob")), SolverOptions{}).status ==
          FeasibilityStatus::SlaterFailure);
}

TEST_CASE("weighted sum") {
    const auto p = parabola();
    ScalarSolver s(p, SolverOptions{});
    const auto a = s.weighted_sum(vec({0, 1}));
    REQUIRE(a.status == ScalarStatus::Optimal);
    CHECK(std::abs(a.value) <= 1e-5);
    CHECK(sup_dist(a.x, vec({1, 0})) <= 1e-2);

    CHECK(s.weighted_sum(vec({2, -1})).status == ScalarStatus::Unbounded);

    const auto disk = load_problem(fixture("unit_disk.prob"));
    ScalarSolver sd(disk, SolverOptions{});
    const auto b = sd.weighted_sum(vec({1, 0}));
    REQUIRE(b.status == ScalarStatus::Optimal);
    CHECK(std::abs(b.value + 1.0) <= 1e-5);
}

TEST_CASE("Pascoletti-Serafini membership examples") {
    const auto p = parabola();
    ScalarSolver s(p, SolverOptions{});
    const Vec v = p.objective_values(s.x0()) + vec({1, 1});
    CHECK(s.pascoletti_serafini(v, vec({0, 1})).status == ScalarStatus::Unbounded);
    CHECK(s.pascoletti_serafini(v, vec({-1, 0})).status == ScalarStatus::Optimal);

    const auto out = s.pascoletti_serafini(vec({0, -1}), -p.cone.c);
    REQUIRE(out.status == ScalarStatus::Optimal);
    CHECK(out.z <= 1e-6);
}

TEST_CASE("multiplier normalization and supporting halfspaces") {
    Rng rng(61);
    for (const char* name : {"parabola.prob", "unit_disk.prob", "neg_sqrt.prob"}) {
        const auto p = load_problem(fixture(name));
        ScalarSolver s(p, SolverOptions{});
        const auto xs = sample_feasible(p, s.x0(), 500, rng);
        REQUIRE(xs.size() == 500);
        int optimal = 0;
        double worst_support = 0.0, worst_weak = 0.0;
        for (int trial = 0; trial < 30; ++trial) {
            const Vec v = p.objective_values(xs[static_cast<std::size_t>(rng.integer(0, 499))]) +
                          rng.uniform(0.1, 2.0) * p.cone.c;
            const Vec d = trial % 2 == 0 ? Vec(-p.cone.c) : rng.gaussian(p.q);
            const auto out = s.pascoletti_serafini(v, d);
            if (out.status != ScalarStatus::Optimal) continue;
            ++optimal;
            CHECK(std::abs(out.w.dot(d) + 1.0) <= 1e-6);
            CHECK(in_dual_cone(p, out.w, 1e-6));
            const double at_star = out.w.dot(p.objective_values(out.x));
            for (const auto& x : xs) worst_support = std::max(worst_support, at_star - out.w.dot(p.objective_values(x)));
            const auto p1 = s.weighted_sum(out.w);
            REQUIRE(p1.status == ScalarStatus::Optimal);
            worst_weak = std::max(worst_weak, at_star - p1.value);
        }
        CHECK_MESSAGE(optimal >= 10, name);
        CHECK_MESSAGE(worst_support <= 1e-5, name << " support violation " << worst_support);
        CHECK_MESSAGE(worst_weak <= 1e-5, name << " weighted-sum gap " << worst_weak);
    }
}

TEST_CASE("doubling the cap keeps optimal outcomes optimal") {
    Rng rng(62);
    for (const char* name : {"parabola.prob", "unit_disk.prob", "neg_sqrt.prob", "icecream_c1.prob"}) {
        const auto p = load_problem(fixture(name));
        SolverOptions base;
        SolverOptions doubled;
        doubled.cap = 2.0 * base.cap;
        ScalarSolver a(p, base), b(p, doubled);
        for (int trial = 0; trial < 10; ++trial) {
            const Vec w = rng.gaussian(p.q);
            if (a.weighted_sum(w).status == ScalarStatus::Optimal)
                CHECK_MESSAGE(b.weighted_sum(w).status != ScalarStatus::Unbounded, name);
            const Vec v = p.objective_values(a.x0()) + rng.uniform_vec(p.q, -2.0, 2.0);
            const Vec d = rng.gaussian(p.q);
            if (a.pascoletti_serafini(v, d).status == ScalarStatus::Optimal)
                CHECK_MESSAGE(b.pascoletti_serafini(v, d).status != ScalarStatus::Unbounded, name);
        }
    }
}

TEST_CASE("unbounded directions") {
    const auto p = parabola();
    const SolverOptions so;
    const Vec x0 = check_feasibility(p, so).x0;
    int unbounded = 0;
    for (const auto& z : p.cone.Rstar) unbounded += detect_unbounded_direction(p, z, x0, so) ? 1 : 0;
    CHECK(unbounded >= 1);

    const auto disk = load_problem(fixture("unit_disk.prob"));
    const Vec d0 = check_feasibility(disk, so).x0;
    for (const auto& z : disk.cone.Rstar) CHECK_FALSE(detect_unbounded_direction(disk, z, d0, so));

    // Reordered by the outer cone cone{(1,0), (-0.02,0.97)}, the problem is bounded.
    auto reposed = p;
    reposed.cone = make_ordering_cone(2, {vec({1, 0}), vec({-0.02, 0.97})}, {});
    for (const auto& z : reposed.cone.Rstar) CHECK_FALSE(detect_unbounded_direction(reposed, z, x0, so));
}
