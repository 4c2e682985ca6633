#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cvop/expr.hpp"
#include "cvop/polyhedral.hpp"
#include "support.hpp"

namespace cvop::testing {

// Random expression trees over all atoms, including combinations the curvature
// calculus must reject. Guarded powers get an affine argument that is at least
// 0.5 at `anchor`.

inline ExprPtr random_affine(int n, Rng& rng) {
    AffineForm f;
    for (int k = 1; k <= n; ++k)
        if (rng.integer(0, 2) > 0) f.terms.emplace_back(k, rng.uniform(-1.0, 1.0));
    if (f.terms.empty()) f.terms.emplace_back(rng.integer(1, n), 1.0);
    f.offset = rng.uniform(-1.0, 1.0);
    return Expr::affine(f);
}

inline ExprPtr random_expr(int n, int depth, const Vec& anchor, Rng& rng) {
    if (depth == 0) return rng.coin() ? random_affine(n, rng) : Expr::variable(rng.integer(1, n));
    switch (rng.integer(0, 7)) {
        case 0: return random_affine(n, rng);
        case 1: return Expr::square(random_expr(n, depth - 1, anchor, rng));
        case 2: return Expr::exp(Expr::scale(0.5, random_expr(n, depth - 1, anchor, rng)));
        case 3: {
            std::vector<ExprPtr> args;
            const int k = rng.integer(1, 3);
            for (int i = 0; i < k; ++i) args.push_back(random_affine(n, rng));
            if (rng.integer(0, 3) == 0) args.push_back(random_expr(n, depth - 1, anchor, rng));
            return Expr::norm2(std::move(args));
        }
        case 4: {
            const auto a = random_affine(n, rng);
            AffineForm f = a->form();
            f.offset += 0.5 + std::abs(f.evaluate(anchor));
            return Expr::power(Expr::affine(f), rng.uniform(1.0, 3.0));
        }
        case 5: {
            std::vector<ExprPtr> terms;
            const int k = rng.integer(2, 3);
            for (int i = 0; i < k; ++i) terms.push_back(random_expr(n, depth - 1, anchor, rng));
            return Expr::sum(std::move(terms));
        }
        case 6: {
            const double s = rng.uniform(0.2, 1.5) * (rng.integer(0, 3) == 0 ? -1.0 : 1.0);
            return Expr::scale(s, random_expr(n, depth - 1, anchor, rng));
        }
        default:
            return Expr::difference(random_expr(n, depth - 1, anchor, rng),
                                    rng.coin() ? random_affine(n, rng) : random_expr(n, depth - 1, anchor, rng));
    }
}

struct PropertyResult {
    int checked = 0;
    int failures = 0;
    double worst = 0.0;
    bool ok() const { return failures == 0 && checked > 0; }
};

/// Gradient against central differences of the smoothed value, h = 1e-6. Pairs with
/// |f(x)| > 1e3 are skipped: there the difference quotient's roundoff (eps |f| / h)
/// approaches the tolerance.
inline PropertyResult gradient_property(int pairs, std::uint64_t seed, double tol = 1e-5) {
    Rng rng(seed);
    PropertyResult res;
    const double h = 1e-6;
    while (res.checked < pairs) {
        const int n = rng.integer(1, 4);
        const Vec x = rng.uniform_vec(n, -1.0, 1.0);
        const auto e = random_expr(n, rng.integer(1, 3), x, rng);
        Vec g;
        try {
            if (std::abs(smoothed_value(*e, x)) > 1e3) continue;
            g = gradient(*e, x);
        } catch (const DomainError&) {
            continue;
        }
        ++res.checked;
        for (int k = 0; k < n; ++k) {
            Vec xp = x, xm = x;
            xp(k) += h;
            xm(k) -= h;
            double fd = 0.0;
            try {
                fd = (smoothed_value(*e, xp) - smoothed_value(*e, xm)) / (2.0 * h);
            } catch (const DomainError&) {
                continue;
            }
            const double err = std::abs(fd - g(k));
            res.worst = std::max(res.worst, err);
            if (err > tol) {
                ++res.failures;
                break;
            }
        }
    }
    return res;
}

/// Midpoint inequality for every expression of a seeded corpus tagged convex.
inline PropertyResult midpoint_property(int expressions, int pairs, std::uint64_t seed, double tol = 1e-10) {
    Rng rng(seed);
    PropertyResult res;
    int convex = 0;
    while (convex < expressions) {
        const int n = rng.integer(1, 4);
        const Vec anchor = rng.uniform_vec(n, -1.0, 1.0);
        const auto e = random_expr(n, rng.integer(1, 3), anchor, rng);
        if (e->curvature() != Curvature::Convex) continue;
        ++convex;
        int done = 0;
        for (int tries = 0; done < pairs && tries < 50 * pairs; ++tries) {
            const Vec a = anchor + rng.uniform_vec(n, -1.0, 1.0);
            const Vec b = anchor + rng.uniform_vec(n, -1.0, 1.0);
            double fa = 0.0, fb = 0.0, fm = 0.0;
            try {
                fa = evaluate(*e, a);
                fb = evaluate(*e, b);
                fm = evaluate(*e, 0.5 * (a + b));
            } catch (const DomainError&) {
                continue;
            }
            ++done;
            ++res.checked;
            const double excess = fm - 0.5 * (fa + fb);
            res.worst = std::max(res.worst, excess);
            if (excess > tol) ++res.failures;
        }
    }
    return res;
}

inline std::vector<Vec> random_points(int q, int count, Rng& rng) {
    std::vector<Vec> pts;
    for (int i = 0; i < count; ++i) pts.push_back(rng.gaussian(q));
    return pts;
}

/// vrep_to_hrep followed by hrep_to_vrep on random bounded polytopes; the hulls
/// must contain each other (l1 distance to hull by LP).
inline PropertyResult dd_round_trip_property(int polytopes, std::uint64_t seed, double tol = 1e-7) {
    Rng rng(seed);
    PropertyResult res;
    for (int i = 0; i < polytopes; ++i) {
        const int q = rng.integer(2, 4);
        const auto pts = random_points(q, rng.integer(q + 1, q + 8), rng);
        const Polyhedron h = vrep_to_hrep(Polyhedron::from_vrep(q, pts, {}));
        const auto v = hrep_to_vrep(Polyhedron::from_hrep(q, h.halfspaces));
        ++res.checked;
        if (!v || !v->bounded()) {
            ++res.failures;
            continue;
        }
        double worst = 0.0;
        for (const auto& p : v->vertices) worst = std::max(worst, l1_distance_to_hull(p, pts, {}));
        for (const auto& p : pts) worst = std::max(worst, l1_distance_to_hull(p, v->vertices, {}));
        res.worst = std::max(res.worst, worst);
        if (worst > tol) ++res.failures;
    }
    return res;
}

/// Random H-polytopes (box plus random cuts around the origin): every vertex is
/// feasible with at least q active halfspaces, every facet of the recomputed
/// H-representation carries at least q vertices, and both H-representations
/// describe the same set.
inline PropertyResult dd_structure_property(int polytopes, std::uint64_t seed, double tol = 1e-7) {
    Rng rng(seed);
    PropertyResult res;
    for (int i = 0; i < polytopes; ++i) {
        const int q = rng.integer(2, 4);
        std::vector<Halfspace> hs;
        for (int k = 0; k < q; ++k) {
            Vec e = Vec::Zero(q);
            e(k) = 1.0;
            hs.push_back({e, -1.0});
            hs.push_back({-e, -1.0});
        }
        const int extra = rng.integer(1, 8);
        for (int k = 0; k < extra; ++k) {
            const Vec w = rng.gaussian(q).normalized();
            hs.push_back({w, -rng.uniform(0.2, 1.0)});
        }
        ++res.checked;
        const auto v = hrep_to_vrep(Polyhedron::from_hrep(q, hs));
        if (!v || !v->bounded() || v->vertices.empty()) {
            ++res.failures;
            continue;
        }
        bool ok = true;
        for (const auto& p : v->vertices) {
            int active = 0;
            for (const auto& h : hs) {
                const double s = h.normal.dot(p) - h.offset;
                res.worst = std::max(res.worst, -s);
                if (s < -tol) ok = false;
                if (std::abs(s) <= tol) ++active;
            }
            if (active < q) ok = false;
        }
        const Polyhedron h2 = vrep_to_hrep(Polyhedron::from_vrep(q, v->vertices, {}));
        for (const auto& f : h2.halfspaces) {
            int support = 0;
            const double scale = f.normal.norm();
            for (const auto& p : v->vertices)
                if (std::abs(f.normal.dot(p) - f.offset) <= tol * scale) ++support;
            if (support < q) ok = false;
        }
        const auto v2 = hrep_to_vrep(Polyhedron::from_hrep(q, h2.halfspaces));
        if (!v2) {
            ok = false;
        } else {
            for (const auto& p : v2->vertices)
                for (const auto& h : hs)
                    if (h.normal.dot(p) - h.offset < -tol) ok = false;
            for (const auto& p : v->vertices)
                if (!contains_point(h2, p, tol)) ok = false;
        }
        if (!ok) ++res.failures;
    }
    return res;
}

/// Pointed solid cone: generators c + r u with |r u| < 0.9 around a unit axis c.
inline std::vector<Vec> random_pointed_cone(int q, int count, Rng& rng) {
    const Vec axis = rng.gaussian(q).normalized();
    std::vector<Vec> gens;
    for (int i = 0; i < count; ++i) gens.push_back(axis + rng.uniform(0.3, 0.9) * rng.gaussian(q).normalized());
    return gens;
}

inline bool contains_all(const PolyCone& c, const std::vector<Vec>& ys, double tol) {
    for (const auto& y : ys)
        if (!c.contains(y, tol)) return false;
    return true;
}

/// dual_cone(dual_cone(c)) and c contain each other's generators.
inline PropertyResult dual_involution_property(int cones, std::uint64_t seed, double tol = 1e-7) {
    Rng rng(seed);
    PropertyResult res;
    for (int i = 0; i < cones; ++i) {
        const int q = rng.integer(2, 4);
        const PolyCone c = cone_from_generators(q, random_pointed_cone(q, rng.integer(q, q + 4), rng));
        const PolyCone cc = dual_cone(dual_cone(c));
        ++res.checked;
        if (!(contains_all(c, cc.generators, tol) && contains_all(cc, c.generators, tol))) ++res.failures;
    }
    return res;
}

}  // namespace cvop::testing
