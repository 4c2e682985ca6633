#pragma once

#include <string>
#include <vector>

#include "cvop/benson.hpp"

namespace cvop {

/// Vertices of a bounded planar polygon given by halfspaces, in counterclockwise order.
std::vector<Vec> polygon_loop(const std::vector<Halfspace>& hs);

/// Points sorted counterclockwise around their centroid (planar).
std::vector<Vec> counterclockwise(std::vector<Vec> pts);

/// Writes `iter_<k>.csv` (columns: set, y1..yq) with the sets Y_In, Y_Out,
/// C_hat and the vertex loop of cone Y_Out ∩ B_1 (planar case) labelled polygon.
void write_snapshot_csv(const std::string& dir, const Snapshot& s, int q);

/// Planar upper-image approximations clipped to a box: `upper_outer.csv`
/// and `upper_inner.csv` (columns: set, x, y; sets vertex, ray, loop).
void write_upper_image_csv(const std::string& dir, const ProblemSpec& spec, const Polyhedron& outer,
                           const Polyhedron& inner);

/// Cross-sections of cone Y_In and cone Y_Out with the plane y_3 = 1:
/// `cross_section.csv` (set, x, y) and `cross_section_triangles.csv`
/// (set, triangle, x, y) as fans around the centroid.
void write_cross_section_csv(const std::string& dir, const std::vector<Vec>& y_in, const std::vector<Vec>& y_out);

/// Planar cross-section {(y1, y2) : (y1, y2, 1) in cone(gens)} clipped to [-box, box]^2.
std::vector<Vec> cone_cross_section(const std::vector<Vec>& gens, double box = 10.0);

/// Every snapshot of the approximation, as iter_<k>.csv files.
void emit_plot_data(const std::string& dir, const ConeApproximation& a);

}  // namespace cvop
