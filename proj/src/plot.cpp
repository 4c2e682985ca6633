#include "cvop/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace cvop {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void row(std::ofstream& os, const std::string& set, const Vec& p) {
    os << set;
    for (Eigen::Index i = 0; i < p.size(); ++i) os << ',' << fmt(p(i));
    os << '\n';
}

std::ofstream open_csv(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream os(std::filesystem::path(dir) / name);
    if (!os) throw std::runtime_error("cannot write " + name + " in " + dir);
    return os;
}

std::vector<Halfspace> box_halfspaces(int dim, const Vec& lo, const Vec& hi) {
    std::vector<Halfspace> hs;
    for (int k = 0; k < dim; ++k) {
        hs.push_back({Vec::Unit(dim, k), lo(k)});
        hs.push_back({-Vec::Unit(dim, k), -hi(k)});
    }
    return hs;
}

}  // namespace

std::vector<Vec> counterclockwise(std::vector<Vec> pts) {
    if (pts.empty()) return pts;
    Vec c = Vec::Zero(2);
    for (const auto& p : pts) c += p.head(2);
    c /= static_cast<double>(pts.size());
    std::sort(pts.begin(), pts.end(), [&](const Vec& a, const Vec& b) {
        return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
    });
    return pts;
}

std::vector<Vec> polygon_loop(const std::vector<Halfspace>& hs) {
    auto p = hrep_to_vrep(Polyhedron::from_hrep(2, hs));
    if (!p) return {};
    return counterclockwise(p->vertices);
}

void write_snapshot_csv(const std::string& dir, const Snapshot& s, int q) {
    auto os = open_csv(dir, "iter_" + std::to_string(s.iter) + ".csv");
    os << "set";
    for (int k = 1; k <= q; ++k) os << ",y" << k;
    os << '\n';
    for (const auto& p : s.y_in) row(os, "Y_In", p);
    for (const auto& p : s.y_out) row(os, "Y_Out", p);
    for (const auto& p : s.c_hat) row(os, "C_hat", p);
    if (q == 2 && !s.y_out.empty()) {
        const auto ball = intersect_unit_ball(cone_from_generators(2, s.y_out));
        for (const auto& p : polygon_loop(ball.halfspaces)) row(os, "polygon", p);
    }
}

void emit_plot_data(const std::string& dir, const ConeApproximation& a) {
    for (const auto& s : a.snapshots) write_snapshot_csv(dir, s, a.q);
}

void write_upper_image_csv(const std::string& dir, const ProblemSpec& spec, const Polyhedron& outer,
                           const Polyhedron& inner) {
    if (spec.q != 2) return;
    // Box around every finite point involved.
    Vec lo = Vec::Constant(2, 1e300), hi = Vec::Constant(2, -1e300);
    auto grow = [&](const Vec& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    };
    for (const auto& v : outer.vertices) grow(v);
    for (const auto& v : inner.vertices) grow(v);
    if (lo(0) > hi(0)) return;
    const Vec pad = ((hi - lo).cwiseMax(Vec::Ones(2))) * 0.5;
    lo -= pad;
    hi += pad;

    auto write = [&](const std::string& name, const Polyhedron& p, std::vector<Halfspace> hs) {
        auto os = open_csv(dir, name);
        os << "set,x,y\n";
        for (const auto& v : p.vertices) row(os, "vertex", v);
        for (const auto& r : p.rays) row(os, "ray", r);
        auto box = box_halfspaces(2, lo, hi);
        hs.insert(hs.end(), box.begin(), box.end());
        for (const auto& v : polygon_loop(hs)) row(os, "loop", v);
    };
    write("upper_outer.csv", outer, outer.halfspaces);
    Polyhedron in = inner.has_vrep && !inner.vertices.empty() ? vrep_to_hrep(inner) : inner;
    write("upper_inner.csv", inner, in.halfspaces);
}

std::vector<Vec> cone_cross_section(const std::vector<Vec>& gens, double box) {
    const PolyCone K = cone_from_generators(3, gens);
    std::vector<Halfspace> hs;
    for (const auto& n : K.normals) {
        const Vec w = n.head(2);
        if (w.cwiseAbs().maxCoeff() <= kMergeTol) {
            if (n(2) < 0.0) return {};
            continue;
        }
        hs.push_back({w, -n(2)});
    }
    auto b = box_halfspaces(2, Vec::Constant(2, -box), Vec::Constant(2, box));
    hs.insert(hs.end(), b.begin(), b.end());
    return polygon_loop(hs);
}

void write_cross_section_csv(const std::string& dir, const std::vector<Vec>& y_in, const std::vector<Vec>& y_out) {
    const auto inner = cone_cross_section(y_in);
    const auto outer = cone_cross_section(y_out);
    {
        auto os = open_csv(dir, "cross_section.csv");
        os << "set,x,y\n";
        for (const auto& p : inner) row(os, "inner", p);
        for (const auto& p : outer) row(os, "outer", p);
    }
    auto os = open_csv(dir, "cross_section_triangles.csv");
    os << "set,triangle,x,y\n";
    auto fan = [&](const std::string& set, const std::vector<Vec>& loop) {
        if (loop.size() < 3) return;
        Vec c = Vec::Zero(2);
        for (const auto& p : loop) c += p;
        c /= static_cast<double>(loop.size());
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const std::string tag = set + "," + std::to_string(i);
            row(os, tag, c);
            row(os, tag, loop[i]);
            row(os, tag, loop[(i + 1) % loop.size()]);
        }
    };
    fan("inner", inner);
    fan("outer", outer);
}

}  // namespace cvop
