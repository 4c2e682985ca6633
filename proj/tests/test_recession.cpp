#include <doctest.h>

#include <cmath>

#include "cvop/lp.hpp"
#include "cvop/recession.hpp"
#include "support.hpp"

using namespace cvop;
using namespace cvop::testing;

namespace {

RecessionOptions options(double delta, int max_iter = 500) {
    RecessionOptions o;
    o.delta = delta;
    o.max_iter = max_iter;
    return o;
}

const ProblemSpec& parabola() {
    static const ProblemSpec spec = load_problem(fixture("parabola.prob"));
    return spec;
}

const ConeApproximation& parabola_run() {
    static const ConeApproximation a =
        approximate_recession_cone(parabola(), TMatrix::standard(parabola().cone.c), options(0.1));
    return a;
}

// min h.normal'y over the polyhedron {cuts}; true when it is at least h.offset.
bool implied(const std::vector<Halfspace>& cuts, const Halfspace& h, double tol) {
    const int q = static_cast<int>(h.normal.size());
    LinearProgram lp;
    lp.c = h.normal;
    lp.A = Mat(static_cast<Eigen::Index>(cuts.size()), q);
    lp.b = Vec(static_cast<Eigen::Index>(cuts.size()));
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        lp.A.row(static_cast<Eigen::Index>(i)) = cuts[i].normal.transpose();
        lp.b(static_cast<Eigen::Index>(i)) = cuts[i].offset;
    }
    const auto r = solve_lp(lp);
    return r.status == LpStatus::Optimal && r.value >= h.offset - tol;
}

}  // namespace

TEST_CASE("T matrix") {
    for (const Vec& c : {vec({0.5, 0.5}), l1_normalized(vec({2, 1})), vec({1, 0}), l1_normalized(vec({1, -2, 3})),
                         vec({0, 0, 1}), vec({0, 1, 0})}) {
        const auto T = TMatrix::standard(c);
        const int q = static_cast<int>(c.size());
        CHECK(sup_dist(T.T.col(q - 1), c) == 0.0);
        CHECK(std::abs(T.T.determinant()) > 1e-12);
        CHECK((T.T * T.Tinv - Mat::Identity(q, q)).norm() <= 1e-12);
        Vec t = Vec::LinSpaced(q, -0.7, 0.9);
        t(q - 1) = 1.0;
        CHECK(sup_dist(T.t_of_w(T.w_of_t(t)), t) <= 1e-12);
    }
    const auto T = TMatrix::standard(vec({0.5, 0.5}));
    CHECK(sup_dist(T.w_of_t(vec({0.25, 1})), vec({0.25, 1.75})) <= 1e-12);
}

TEST_CASE("parabola trace") {
    const auto& a = parabola_run();
    REQUIRE(a.status == RecessionStatus::Done);
    CHECK(a.iterations == 6);
    REQUIRE(a.log.size() == 6);
    const Vec rows[] = {vec({0.16, 0.83}), vec({0.083, 0.917}), vec({0.04, 0.96})};
    for (int i = 0; i < 3; ++i) {
        CHECK(a.log[static_cast<std::size_t>(i)].action == LoopAction::InnerUpdate);
        CHECK(sup_dist(a.log[static_cast<std::size_t>(i)].added, rows[i]) <= 0.02);
    }
    CHECK(a.log[3].action == LoopAction::Accept);
    CHECK(sup_dist(a.log[3].d, vec({0, 1})) <= 1e-9);
    CHECK(a.log[5].action == LoopAction::Accept);
    CHECK(sup_dist(a.log[5].d, vec({-0.02, 0.97})) <= 0.02);

    REQUIRE(!a.snapshots.empty());
    CHECK(set_distance(a.snapshots[0].y_out, {vec({1, 0}), vec({0, 1}), vec({-0.17, 0.83})}) <= 0.02);
    CHECK(set_distance(a.y_out, {vec({1, 0}), vec({0, 1}), vec({-0.02, 0.97})}) <= 0.02);
    for (const Vec& r : {vec({1, 0}), vec({1.0 / 3.0, 2.0 / 3.0}), vec({0.16, 0.83}), vec({0.083, 0.917}),
                         vec({0.04, 0.96})}) {
        double best = INFINITY;
        for (const auto& y : a.y_in) best = std::min(best, sup_dist(y, r));
        CHECK(best <= 0.02);
    }
    const auto report = certify_delta(a.y_in, a.y_out, 0.1);
    CHECK(report.ok);
    CHECK(report.distance <= 0.1);
}

TEST_CASE("dual points are normalized") {
    const auto& a = parabola_run();
    CHECK(a.tbar.size() == a.xbar.size());
    for (const auto& t : a.tbar) CHECK(std::abs(t(t.size() - 1) - 1.0) <= 1e-12);
}

TEST_CASE("bounded, infeasible and Slater exits") {
    const auto disk = load_problem(fixture("unit_disk.prob"));
    const auto b = approximate_recession_cone(disk, TMatrix::standard(disk.cone.c), options(0.1));
    CHECK(b.status == RecessionStatus::Bounded);
    CHECK(b.y_out == disk.cone.R);
    CHECK(b.log.empty());

    for (const char* name : {"infeasible.prob", "slater.prob"}) {
        const auto p = load_problem(fixture(name));
        const auto r = approximate_recession_cone(p, TMatrix::standard(p.cone.c), options(0.1));
        CHECK(r.status == (std::string(name) == "slater.prob" ? RecessionStatus::SlaterFailure : RecessionStatus::Infeasible));
        CHECK(r.xbar.empty());
        CHECK(r.cuts.empty());
    }
}

TEST_CASE("iteration cap reports partial state") {
    const auto r = approximate_recession_cone(parabola(), TMatrix::standard(parabola().cone.c), options(0.1, 2));
    CHECK(r.status == RecessionStatus::IterationLimit);
    CHECK(r.iterations == 2);
    CHECK(!r.y_out.empty());
}

TEST_CASE("certify delta") {
    const std::vector<Vec> in = {vec({1, 0}), vec({0, 1})};
    const auto same = certify_delta(in, in, 0.1);
    CHECK(same.ok);
    CHECK(same.distance <= 1e-12);

    const auto bad = certify_delta({vec({1, 0})}, in, 0.5);
    CHECK_FALSE(bad.ok);
    CHECK(bad.distance == doctest::Approx(1.0));
    CHECK(bad.offending == 1);
    CHECK(bad.angle_bound == doctest::Approx(std::acos(1.0 - 2.0 * 0.25 / 2.0)));

    const auto outside = certify_delta({vec({1, 0}), vec({-0.5, 0.5})}, in, 1.5);
    CHECK_FALSE(outside.inner_in_outer);
    CHECK_FALSE(outside.ok);
}

TEST_CASE("outer approximation only shrinks and contains the upper image") {
    Rng rng(71);
    for (const char* name : {"parabola.prob", "neg_sqrt.prob", "icecream_c1.prob", "icecream_c2.prob"}) {
        const auto p = load_problem(fixture(name));
        const double delta = p.q == 3 ? 0.2 : 0.1;
        ScalarSolver s(p, SolverOptions{});
        const auto a = approximate_recession_cone(s, TMatrix::standard(p.cone.c), options(delta));
        REQUIRE_MESSAGE(a.status == RecessionStatus::Done, name);

        for (std::size_t k = 1; k < a.cuts.size(); ++k) {
            const std::vector<Halfspace> next(a.cuts.begin(), a.cuts.begin() + static_cast<std::ptrdiff_t>(k) + 1);
            for (std::size_t j = 0; j < k; ++j) CHECK(implied(next, a.cuts[j], kContainTol));
        }

        const auto outer = a.outer();
        for (const auto& x : sample_feasible(p, s.x0(), 200, rng)) {
            const Vec y = p.objective_values(x);
            CHECK_MESSAGE(contains_point(outer, y, 1e-7 * std::max(1.0, y.lpNorm<1>())), name);
        }
    }
}

TEST_CASE("inner directions pass the membership oracle and lie in the outer cone") {
    Rng rng(72);
    for (const char* name : {"parabola.prob", "neg_sqrt.prob", "icecream_c1.prob"}) {
        const auto p = load_problem(fixture(name));
        ScalarSolver s(p, SolverOptions{});
        const auto a = approximate_recession_cone(s, TMatrix::standard(p.cone.c), options(p.q == 3 ? 0.2 : 0.1));
        REQUIRE(a.status == RecessionStatus::Done);
        const PolyCone C = p.cone.cone;
        for (const auto& r : a.y_in) {
            const bool in_c = C.contains(r, 1e-9);
            CHECK_MESSAGE((in_c || s.pascoletti_serafini(a.v, r).status == ScalarStatus::Unbounded), name);
        }
        const PolyCone out = cone_from_generators(p.q, a.y_out);
        for (int i = 0; i < 200; ++i) {
            Vec y = Vec::Zero(p.q);
            for (const auto& r : a.y_in) y += rng.uniform(0.0, 1.0) * r;
            CHECK(out.contains(y, 1e-7));
        }
    }
}

TEST_CASE("initial outer approximation is self-bounded") {
    for (const char* name : {"parabola.prob", "neg_sqrt.prob"}) {
        const auto p = load_problem(fixture(name));
        const auto a = approximate_recession_cone(p, TMatrix::standard(p.cone.c), options(0.1));
        REQUIRE(a.status == RecessionStatus::Done);
        double m = INFINITY;
        for (const auto& h : a.cuts) m = std::min(m, h.offset / h.normal.dot(p.cone.c));
        const Vec p0 = m * p.cone.c;
        const auto v = hrep_to_vrep(a.outer());
        REQUIRE(v);
        const PolyCone rc = recession_cone(a.outer());
        for (const auto& x : v->vertices) CHECK_MESSAGE(rc.contains(x - p0, 1e-7), name);
    }
}
