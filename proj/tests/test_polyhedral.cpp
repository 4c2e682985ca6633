#include <doctest.h>

#include <cmath>

#include "cvop/polyhedral.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace cvop;
using namespace cvop::testing;

namespace {

Halfspace hs(std::initializer_list<double> w, double g) { return {vec(w), g}; }

bool same_halfspace(const Halfspace& a, const Halfspace& b, double tol) {
    const double na = a.normal.lpNorm<1>(), nb = b.normal.lpNorm<1>();
    return sup_dist(a.normal / na, b.normal / nb) <= tol && std::abs(a.offset / na - b.offset / nb) <= tol;
}

bool has_halfspace(const std::vector<Halfspace>& set, const Halfspace& h, double tol = 1e-9) {
    for (const auto& s : set)
        if (same_halfspace(s, h, tol)) return true;
    return false;
}

PolyCone orthant2() { return cone_from_generators(2, {vec({1, 0}), vec({0, 1})}); }
PolyCone skew2() { return cone_from_generators(2, {vec({1, 0}), vec({1, 2})}); }

}  // namespace

TEST_CASE("H to V: simplex and orthant") {
    const auto s = hrep_to_vrep(Polyhedron::from_hrep(2, {hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, -1}, -1)}));
    REQUIRE(s);
    CHECK(s->rays.empty());
    CHECK(set_distance(s->vertices, {vec({0, 0}), vec({1, 0}), vec({0, 1})}) <= 1e-12);

    const auto o = hrep_to_vrep(Polyhedron::from_hrep(2, {hs({1, 0}, 0), hs({0, 1}, 0)}));
    REQUIRE(o);
    CHECK(set_distance(o->vertices, {vec({0, 0})}) <= 1e-12);
    CHECK(set_distance(o->rays, {vec({1, 0}), vec({0, 1})}) <= 1e-12);
}

TEST_CASE("H to V: empty polyhedron") {
    CHECK_FALSE(hrep_to_vrep(Polyhedron::from_hrep(1, {hs({1}, 1), hs({-1}, 0)})));
}

TEST_CASE("H to V: lineality") {
    const auto p = hrep_to_vrep(Polyhedron::from_hrep(2, {hs({0, 1}, 1)}));
    REQUIRE(p);
    REQUIRE(p->lines.size() == 1);
    CHECK(std::abs(p->lines[0](1)) <= 1e-12);
    CHECK(set_distance(p->rays, {vec({0, 1})}) <= 1e-12);
}

TEST_CASE("V to H: simplex and a skewed cone") {
    const auto s = vrep_to_hrep(Polyhedron::from_vrep(2, {vec({0, 0}), vec({1, 0}), vec({0, 1})}, {}));
    CHECK(s.halfspaces.size() == 3);
    CHECK(has_halfspace(s.halfspaces, hs({1, 0}, 0)));
    CHECK(has_halfspace(s.halfspaces, hs({0, 1}, 0)));
    CHECK(has_halfspace(s.halfspaces, hs({-1, -1}, -1)));

    const auto c = vrep_to_hrep(Polyhedron::from_vrep(2, {vec({0, 0})}, {vec({1, 0}), vec({1, 2})}));
    CHECK(c.halfspaces.size() == 2);
    CHECK(has_halfspace(c.halfspaces, hs({2, -1}, 0)));
    CHECK(has_halfspace(c.halfspaces, hs({0, 1}, 0)));
}

TEST_CASE("V to H: lower-dimensional input gives its affine hull") {
    const auto seg = vrep_to_hrep(Polyhedron::from_vrep(2, {vec({0, 0}), vec({1, 1})}, {}));
    CHECK(has_halfspace(seg.halfspaces, hs({1, -1}, 0)));
    CHECK(has_halfspace(seg.halfspaces, hs({-1, 1}, 0)));
    CHECK(contains_point(seg, vec({0.5, 0.5})));
    CHECK_FALSE(contains_point(seg, vec({0.5, 0.6})));
    CHECK_FALSE(contains_point(seg, vec({1.5, 1.5})));
}

TEST_CASE("six-dimensional cross-polytope") {
    const auto p = hrep_to_vrep(Polyhedron::from_hrep(6, l1_ball_halfspaces(6)));
    REQUIRE(p);
    CHECK(p->vertices.size() == 12);
    for (const auto& v : p->vertices) CHECK(std::abs(v.lpNorm<1>() - 1.0) <= 1e-12);
    CHECK(vrep_to_hrep(*p).halfspaces.size() == 64);
}

TEST_CASE("irredundant halfspaces") {
    auto p = Polyhedron::from_hrep(2, {hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, -1}, -1), hs({1, 0}, -5), hs({2, 0}, 0)});
    p = *hrep_to_vrep(p);
    const auto keep = irredundant_halfspaces(p);
    CHECK(keep == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("recession cone") {
    const auto r = recession_cone(Polyhedron::from_hrep(2, {hs({1, 0}, 1), hs({0, 1}, 2)}));
    CHECK(set_distance(r.generators, {vec({1, 0}), vec({0, 1})}) <= 1e-12);

    const auto simplex = Polyhedron::from_hrep(2, {hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, -1}, -1)});
    const auto z = recession_cone(simplex);
    CHECK(z.generators.empty());
    CHECK(z.contains(vec({0, 0})));
    CHECK_FALSE(z.contains(vec({1, 0})));
}

TEST_CASE("recession cone agrees with long steps from an interior point") {
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const int q = rng.integer(2, 4);
        std::vector<Halfspace> h;
        const Vec axis = rng.gaussian(q).normalized();
        for (int k = 0; k < q + 2; ++k) {
            const Vec w = (axis + rng.uniform(0.0, 0.9) * rng.gaussian(q).normalized()).normalized();
            h.push_back({w, -rng.uniform(0.1, 1.0)});
        }
        const auto p = Polyhedron::from_hrep(q, h);
        const auto rc = recession_cone(p);
        const Vec y0 = Vec::Zero(q);
        for (int s = 0; s < 20; ++s) {
            const Vec d = rng.gaussian(q).normalized();
            bool stays = true;
            for (double a : {1.0, 10.0, 1000.0})
                if (!contains_point(p, y0 + a * d, 1e-7)) stays = false;
            CHECK(stays == rc.contains(d, 1e-7));
        }
    }
}

TEST_CASE("dual cones") {
    const auto d = dual_cone(skew2());
    CHECK(set_distance(d.generators, {l1_normalized(vec({0, 1})), l1_normalized(vec({2, -1}))}) <= 1e-12);
    CHECK(set_distance(dual_cone(orthant2()).generators, orthant2().generators) <= 1e-12);
}

TEST_CASE("dual cone reverses inclusion") {
    Rng rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const int q = rng.integer(2, 4);
        auto gens = random_pointed_cone(q, rng.integer(q, q + 3), rng);
        const PolyCone a = cone_from_generators(q, gens);
        gens.push_back(gens.front() + 0.5 * rng.gaussian(q));
        const PolyCone b = cone_from_generators(q, gens);
        REQUIRE(contains_all(b, a.generators, 1e-9));
        CHECK(contains_all(dual_cone(a), dual_cone(b).generators, 1e-7));
    }
}

TEST_CASE("unit ball intersections") {
    const auto sq = hrep_to_vrep(intersect_unit_ball(orthant2()));
    REQUIRE(sq);
    CHECK(set_distance(sq->vertices, {vec({0, 0}), vec({1, 0}), vec({0, 1})}) <= 1e-12);
    CHECK(set_distance(nonzero_vertices(*sq), {vec({1, 0}), vec({0, 1})}) <= 1e-12);

    const auto sk = hrep_to_vrep(intersect_unit_ball(skew2()));
    REQUIRE(sk);
    CHECK(set_distance(nonzero_vertices(*sk), {vec({1, 0}), vec({1.0 / 3.0, 2.0 / 3.0})}) <= 1e-12);

    PolyCone full;
    full.dim = 2;
    full.lines = {vec({1, 0}), vec({0, 1})};
    const auto cp = hrep_to_vrep(intersect_unit_ball(full));
    REQUIRE(cp);
    CHECK(set_distance(cp->vertices, {vec({1, 0}), vec({-1, 0}), vec({0, 1}), vec({0, -1})}) <= 1e-12);
}

TEST_CASE("containment") {
    const auto o = Polyhedron::from_hrep(2, {hs({1, 0}, 0), hs({0, 1}, 0)});
    CHECK(contains_point(o, vec({0, 0})));
    CHECK_FALSE(contains_point(o, vec({-1, 0})));
}

TEST_CASE("l1 distances") {
    const auto sq = intersect_unit_ball(orthant2());
    CHECK(l1_distance_point_to_set(vec({2, 0}), sq) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l1_distance_point_to_set(vec({0.2, 0.3}), sq) <= 1e-12);
    CHECK(l1_distance_point_to_set(vec({0, 1}), intersect_unit_ball(skew2())) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(l1_distance_to_hull(vec({0, 1}), {vec({0, 0})}, {vec({1, 0}), vec({1, 2})}) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Hausdorff distance of cones") {
    CHECK(hausdorff_cone_distance(skew2(), skew2()) <= 1e-12);
    CHECK(hausdorff_cone_distance(orthant2(), skew2()) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    Rng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const int q = rng.integer(2, 3);
        const PolyCone a = cone_from_generators(q, random_pointed_cone(q, rng.integer(q, q + 2), rng));
        const PolyCone b = cone_from_generators(q, random_pointed_cone(q, rng.integer(q, q + 2), rng));
        const double ab = hausdorff_cone_distance(a, b);
        CHECK(ab >= 0.0);
        CHECK(std::abs(ab - hausdorff_cone_distance(b, a)) <= 1e-9);
        CHECK(hausdorff_cone_distance(a, a) <= 1e-9);
        const bool mutual = contains_all(a, b.generators, 1e-7) && contains_all(b, a.generators, 1e-7);
        CHECK((ab <= 1e-7) == mutual);
    }
}

TEST_CASE("nearest l1 tie break") {
    const auto [i, d] = nearest_l1(vec({0.5, 0.5}), {vec({1, 0}), vec({0, 1}), vec({0.6, 0.4})});
    CHECK(i == 2);
    CHECK(d == doctest::Approx(0.2));
    // (0,1) and (1,0) are equally far in l1 from (0.5,0.5); the lower index wins.
    CHECK(nearest_l1(vec({0.5, 0.5}), {vec({1, 0}), vec({0, 1})}).first == 0);
}

TEST_CASE("double description round trip") {
    const auto r = dd_round_trip_property(100, 51);
    CHECK(r.ok());
    MESSAGE("worst round trip distance " << r.worst);
}

TEST_CASE("double description structure") {
    const auto r = dd_structure_property(200, 52);
    CHECK(r.ok());
}

TEST_CASE("dual cone involution") {
    CHECK(dual_involution_property(50, 53).ok());
}
