#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace cvop {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kMergeTol = 1e-9;
inline constexpr double kContainTol = 1e-7;

/// {y : normal' y >= offset}
struct Halfspace {
    Vec normal;
    double offset = 0.0;
};

/// Convex polyhedron with an optional H-representation and an optional
/// V-representation (vertices, extreme rays, lineality basis).
struct Polyhedron {
    int dim = 0;
    bool has_hrep = false;
    std::vector<Halfspace> halfspaces;
    bool has_vrep = false;
    std::vector<Vec> vertices;
    std::vector<Vec> rays;
    std::vector<Vec> lines;

    static Polyhedron from_hrep(int dim, std::vector<Halfspace> hs);
    static Polyhedron from_vrep(int dim, std::vector<Vec> vertices, std::vector<Vec> rays,
                                std::vector<Vec> lines = {});
    bool bounded() const { return rays.empty() && lines.empty(); }
};

/// Polyhedral cone  cone(generators) + span(lines)  =  {y : N'y >= 0, E'y = 0}.
struct PolyCone {
    int dim = 0;
    std::vector<Vec> generators;  // extreme rays, l1-normalized
    std::vector<Vec> lines;       // lineality basis
    std::vector<Vec> normals;     // facet normals
    std::vector<Vec> equalities;  // normals of the linear hull's orthogonal complement
    bool pointed = true;
    bool solid = true;
    bool nontrivial = true;

    bool contains(const Vec& y, double tol = kContainTol) const;
};

/// Extreme rays and lineality space of {u : A u >= 0} by the double
/// description method.
struct ConeGenerators {
    std::vector<Vec> rays;
    std::vector<Vec> lines;
};
ConeGenerators double_description(const Mat& A);

/// V-representation of an H-polyhedron; std::nullopt when it is empty.
std::optional<Polyhedron> hrep_to_vrep(const Polyhedron& p);

/// Minimal H-representation of a V-polyhedron. Lower-dimensional input yields
/// its affine hull as pairs of opposite halfspaces.
Polyhedron vrep_to_hrep(const Polyhedron& p);

/// Indices of the halfspaces of `p` (which needs both representations) that
/// define facets; among halfspaces defining the same facet the first is kept.
std::vector<std::size_t> irredundant_halfspaces(const Polyhedron& p);

PolyCone cone_from_generators(int dim, const std::vector<Vec>& gens);
PolyCone cone_from_normals(int dim, const std::vector<Vec>& normals);
PolyCone recession_cone(const Polyhedron& p);
PolyCone dual_cone(const PolyCone& c);

/// H-representation of cone ∩ B_1(0) (l1 ball as its 2^q facets).
Polyhedron intersect_unit_ball(const PolyCone& c);
std::vector<Halfspace> l1_ball_halfspaces(int dim);

/// Nonzero vertices of a bounded polyhedron, snapped to unit l1 length when
/// within 1e-7 of it.
std::vector<Vec> nonzero_vertices(const Polyhedron& p);

bool contains_point(const Polyhedron& p, const Vec& y, double tol = kContainTol);

/// min ||y - u||_1 over u in p (needs the H-rep).
double l1_distance_point_to_set(const Vec& y, const Polyhedron& p);

/// min ||y - u||_1 over u in conv(vertices) + cone(rays).
double l1_distance_to_hull(const Vec& y, const std::vector<Vec>& vertices, const std::vector<Vec>& rays);

/// l1 Hausdorff distance between a ∩ B_1 and b ∩ B_1.
double hausdorff_cone_distance(const PolyCone& a, const PolyCone& b);

/// Index and l1 distance of the element of a non-empty `set` closest to d; l1 ties
/// (within 1e-9) go to the Euclidean nearest, then to the lower index.
std::pair<std::size_t, double> nearest_l1(const Vec& d, const std::vector<Vec>& set);

Vec l1_normalized(const Vec& v);

/// Sort points lexicographically and drop duplicates within kMergeTol (sup norm).
std::vector<Vec> unique_points(std::vector<Vec> pts);

bool lex_less(const Vec& a, const Vec& b);

}  // namespace cvop
