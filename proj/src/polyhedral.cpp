#include "cvop/polyhedral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

#include "cvop/lp.hpp"

namespace cvop {

namespace {

constexpr double kDDTol = 1e-9;
constexpr double kHomogTol = 1e-11;
constexpr double kRefineTol = 1e-7;
constexpr double kRankGap = 1e-6;

class Bits {
public:
    explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1U; }
    Bits& operator|=(const Bits& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
        return *this;
    }
    Bits operator&(const Bits& o) const {
        Bits r;
        r.w_.resize(w_.size());
        for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] = w_[k] & o.w_[k];
        return r;
    }
    bool subset_of(const Bits& o) const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & ~o.w_[k]) return false;
        return true;
    }
    int count() const {
        int c = 0;
        for (auto x : w_) c += std::popcount(x);
        return c;
    }

private:
    std::vector<std::uint64_t> w_;
};

struct DDRay {
    Vec v;
    Bits zero;
};

Vec sup_normalized(const Vec& v) {
    const double m = v.cwiseAbs().maxCoeff();
    return m > 0.0 ? Vec(v / m) : v;
}

// Merge rays that agree within kMergeTol, keeping the union of their zero sets.
std::vector<DDRay> merge_duplicates(std::vector<DDRay> rays) {
    std::sort(rays.begin(), rays.end(), [](const DDRay& a, const DDRay& b) { return lex_less(a.v, b.v); });
    std::vector<DDRay> out;
    for (auto& r : rays) {
        bool merged = false;
        for (auto it = out.rbegin(); it != out.rend() && r.v(0) - it->v(0) <= kMergeTol; ++it) {
            if ((it->v - r.v).cwiseAbs().maxCoeff() <= kMergeTol) {
                it->zero |= r.zero;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(std::move(r));
    }
    return out;
}

int rank_of(const std::vector<Vec>& rows, int dim) {
    if (rows.empty()) return 0;
    Mat M(static_cast<Eigen::Index>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = sup_normalized(rows[i]).transpose();
    Eigen::FullPivLU<Mat> lu(M);
    lu.setThreshold(1e-8);
    return static_cast<int>(lu.rank());
}

Mat stack_rows(const std::vector<Vec>& rows, int dim) {
    Mat M(static_cast<Eigen::Index>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return M;
}

PolyCone build_cone(int dim, std::vector<Vec> rays, std::vector<Vec> lines) {
    PolyCone c;
    c.dim = dim;
    std::vector<Vec> rows;
    for (const auto& r : rays) rows.push_back(r);
    for (const auto& l : lines) {
        rows.push_back(l);
        rows.push_back(-l);
    }
    ConeGenerators dual = double_description(stack_rows(rows, dim));
    for (auto& r : rays) c.generators.push_back(l1_normalized(r));
    c.generators = unique_points(std::move(c.generators));
    for (auto& l : lines) c.lines.push_back(sup_normalized(l));
    for (auto& n : dual.rays) c.normals.push_back(l1_normalized(n));
    c.normals = unique_points(std::move(c.normals));
    for (auto& e : dual.lines) c.equalities.push_back(sup_normalized(e));
    c.pointed = c.lines.empty();
    c.solid = c.equalities.empty();
    c.nontrivial = !(c.generators.empty() && c.lines.empty()) && !(c.normals.empty() && c.equalities.empty());
    return c;
}

// Orthonormal basis of the complement of span(lines).
Mat complement_basis(const std::vector<Vec>& lines, int D) {
    if (lines.empty()) return Mat::Identity(D, D);
    Eigen::JacobiSVD<Mat> sl(stack_rows(lines, D), Eigen::ComputeFullV);
    return sl.matrixV().rightCols(D - static_cast<int>(lines.size()));
}

// Null vector of the unit rows `tight` within span(B), oriented along `guess`.
// Empty when the rows do not pin down a single direction.
std::optional<Vec> null_ray(const std::vector<Vec>& tight, const Mat& B, const Vec& guess) {
    const int k = static_cast<int>(B.cols());
    if (k <= 1 || static_cast<int>(tight.size()) < k - 1) return std::nullopt;
    const Mat M = stack_rows(tight, static_cast<int>(B.rows())) * B;
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    if (sv.size() < k - 1 || sv(k - 2) < kRankGap) return std::nullopt;
    if (sv.size() >= k && sv(k - 1) > kRefineTol) return std::nullopt;
    Vec y = B * svd.matrixV().col(k - 1);
    if (y.dot(guess) < 0.0) y = -y;
    return y;
}

// Recompute an extreme ray from the rows it is tight on, so that rays reached
// along different pivot paths coincide to roundoff.
Vec refine_ray(const Mat& A, const std::vector<Vec>& lines, const Vec& r) {
    const int D = static_cast<int>(A.cols());
    const Vec rn = r / r.norm();
    std::vector<Vec> tight;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double an = A.row(i).norm();
        if (an > 0.0 && std::abs(A.row(i).dot(rn)) <= kRefineTol * an) tight.push_back(A.row(i).transpose() / an);
    }
    const auto y = null_ray(tight, complement_basis(lines, D), rn);
    if (!y) return r;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        if (A.row(i).dot(*y) < -kRefineTol * A.row(i).norm()) return r;
    return sup_normalized(*y);
}

}  // namespace

bool lex_less(const Vec& a, const Vec& b) {
    for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return a.size() < b.size();
}

Vec l1_normalized(const Vec& v) {
    const double n = v.lpNorm<1>();
    return n > 0.0 ? Vec(v / n) : v;
}

std::vector<Vec> unique_points(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(), lex_less);
    std::vector<Vec> out;
    for (auto& p : pts) {
        bool dup = false;
        for (const auto& o : out)
            if ((o - p).cwiseAbs().maxCoeff() <= kMergeTol) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(std::move(p));
    }
    return out;
}

std::pair<std::size_t, double> nearest_l1(const Vec& d, const std::vector<Vec>& set) {
    if (set.empty()) throw std::invalid_argument("nearest_l1: empty set");
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    double b2 = bd;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double dist = (d - set[i]).lpNorm<1>();
        const double e2 = (d - set[i]).norm();
        // Ties in the l1 distance go to the Euclidean nearest point.
        if (dist < bd - kMergeTol || (dist <= bd + kMergeTol && e2 < b2)) {
            best = i;
            bd = dist;
            b2 = e2;
        }
    }
    return {best, bd};
}

Polyhedron Polyhedron::from_hrep(int dim, std::vector<Halfspace> hs) {
    Polyhedron p;
    p.dim = dim;
    p.has_hrep = true;
    p.halfspaces = std::move(hs);
    return p;
}

Polyhedron Polyhedron::from_vrep(int dim, std::vector<Vec> vertices, std::vector<Vec> rays, std::vector<Vec> lines) {
    Polyhedron p;
    p.dim = dim;
    p.has_vrep = true;
    p.vertices = unique_points(std::move(vertices));
    for (auto& r : rays)
        if (r.cwiseAbs().maxCoeff() > kMergeTol) p.rays.push_back(l1_normalized(r));
    p.rays = unique_points(std::move(p.rays));
    p.lines = std::move(lines);
    return p;
}

bool PolyCone::contains(const Vec& y, double tol) const {
    const double scale = std::max(1.0, y.lpNorm<1>());
    for (const auto& n : normals)
        if (n.dot(y) < -tol * scale) return false;
    for (const auto& e : equalities)
        if (std::abs(e.dot(y)) > tol * scale * std::max(1.0, e.lpNorm<1>())) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Double description

ConeGenerators double_description(const Mat& A) {
    const int D = static_cast<int>(A.cols());
    const std::size_t m = static_cast<std::size_t>(A.rows());
    std::vector<Vec> lines;
    for (int k = 0; k < D; ++k) lines.push_back(Vec::Unit(D, k));
    std::vector<DDRay> rays;
    std::vector<std::size_t> processed;
    std::vector<Vec> unit_rows(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec a = A.row(static_cast<Eigen::Index>(i)).transpose();
        const double an = a.norm();
        unit_rows[i] = an > 0.0 ? Vec(a / an) : a;
    }

    for (std::size_t i = 0; i < m; ++i) {
        Vec a = A.row(static_cast<Eigen::Index>(i)).transpose();
        if (a.cwiseAbs().maxCoeff() <= 0.0) continue;
        a = sup_normalized(a);

        // A line not orthogonal to a: it becomes a ray, the rest are projected.
        int best = -1;
        double bv = kDDTol;
        for (std::size_t k = 0; k < lines.size(); ++k) {
            const double s = std::abs(a.dot(lines[k]));
            if (s > bv) {
                bv = s;
                best = static_cast<int>(k);
            }
        }
        if (best >= 0) {
            Vec L = lines[static_cast<std::size_t>(best)];
            double s = a.dot(L);
            if (s < 0) {
                L = -L;
                s = -s;
            }
            lines.erase(lines.begin() + best);
            for (auto& l : lines) l = sup_normalized(Vec(l - (a.dot(l) / s) * L));
            for (auto& r : rays) {
                r.v = sup_normalized(Vec(r.v - (a.dot(r.v) / s) * L));
                r.zero.set(i);
            }
            DDRay nr{sup_normalized(L), Bits(m)};
            for (auto j : processed) nr.zero.set(j);
            rays.push_back(std::move(nr));
            processed.push_back(i);
            continue;
        }

        std::vector<double> s(rays.size());
        std::vector<std::size_t> pos, neg;
        for (std::size_t k = 0; k < rays.size(); ++k) {
            s[k] = a.dot(rays[k].v);
            if (s[k] > kDDTol)
                pos.push_back(k);
            else if (s[k] < -kDDTol)
                neg.push_back(k);
            else
                rays[k].zero.set(i);
        }
        if (neg.empty()) {
            processed.push_back(i);
            continue;
        }
        const int need = D - static_cast<int>(lines.size()) - 2;
        const Mat B = complement_basis(lines, D);
        std::vector<DDRay> created;
        for (auto p : pos) {
            for (auto n : neg) {
                Bits z = rays[p].zero & rays[n].zero;
                if (z.count() < need) continue;
                bool adjacent = true;
                for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
                    if (k == p || k == n) continue;
                    if (z.subset_of(rays[k].zero)) adjacent = false;
                }
                if (!adjacent) continue;
                Vec v = s[p] * rays[n].v - s[n] * rays[p].v;
                z.set(i);
                std::vector<Vec> tight;
                for (std::size_t j = 0; j <= i; ++j)
                    if (z.test(j)) tight.push_back(unit_rows[j]);
                if (const auto y = null_ray(tight, B, v)) v = *y;
                created.push_back({sup_normalized(v), std::move(z)});
            }
        }
        std::vector<DDRay> next;
        for (std::size_t k = 0; k < rays.size(); ++k)
            if (s[k] >= -kDDTol) next.push_back(std::move(rays[k]));
        for (auto& c : created) next.push_back(std::move(c));
        rays = merge_duplicates(std::move(next));
        processed.push_back(i);
    }

    ConeGenerators out;
    for (auto& r : rays)
        if (r.v.cwiseAbs().maxCoeff() > kDDTol) out.rays.push_back(refine_ray(A, lines, r.v));
    out.rays = unique_points(std::move(out.rays));
    out.lines = std::move(lines);
    return out;
}

std::optional<Polyhedron> hrep_to_vrep(const Polyhedron& p) {
    if (!p.has_hrep) throw std::invalid_argument("hrep_to_vrep: no H-representation");
    const int q = p.dim;
    Mat A(static_cast<Eigen::Index>(p.halfspaces.size()) + 1, q + 1);
    for (std::size_t i = 0; i < p.halfspaces.size(); ++i) {
        const auto& h = p.halfspaces[i];
        A.row(static_cast<Eigen::Index>(i)).head(q) = h.normal.transpose();
        A(static_cast<Eigen::Index>(i), q) = -h.offset;
    }
    A.row(A.rows() - 1).setZero();
    A(A.rows() - 1, q) = 1.0;
    ConeGenerators g = double_description(A);

    Polyhedron out = p;
    out.has_vrep = true;
    out.vertices.clear();
    out.rays.clear();
    out.lines.clear();
    for (const auto& r : g.rays) {
        if (r(q) > kHomogTol)
            out.vertices.push_back(r.head(q) / r(q));
        else if (r.head(q).cwiseAbs().maxCoeff() > kDDTol)
            out.rays.push_back(l1_normalized(r.head(q)));
    }
    for (const auto& l : g.lines)
        if (l.head(q).cwiseAbs().maxCoeff() > kDDTol) out.lines.push_back(sup_normalized(l.head(q)));
    if (out.vertices.empty()) return std::nullopt;
    out.vertices = unique_points(std::move(out.vertices));
    out.rays = unique_points(std::move(out.rays));
    return out;
}

Polyhedron vrep_to_hrep(const Polyhedron& p) {
    if (!p.has_vrep) throw std::invalid_argument("vrep_to_hrep: no V-representation");
    const int q = p.dim;
    std::vector<Vec> rows;
    for (const auto& v : p.vertices) {
        Vec h(q + 1);
        h << v, 1.0;
        rows.push_back(h);
    }
    for (const auto& r : p.rays) {
        Vec h(q + 1);
        h << r, 0.0;
        rows.push_back(h);
    }
    for (const auto& l : p.lines) {
        Vec h(q + 1);
        h << l, 0.0;
        rows.push_back(h);
        rows.push_back(-h);
    }
    ConeGenerators g = double_description(stack_rows(rows, q + 1));
    Polyhedron out = p;
    out.has_hrep = true;
    out.halfspaces.clear();
    auto emit = [&](const Vec& a) {
        Vec w = a.head(q);
        const double n = w.lpNorm<1>();
        if (n <= kDDTol) return;
        out.halfspaces.push_back({w / n, -a(q) / n});
    };
    for (const auto& a : g.rays) emit(a);
    for (const auto& l : g.lines) {
        emit(l);
        emit(-l);
    }
    return out;
}

std::vector<std::size_t> irredundant_halfspaces(const Polyhedron& p) {
    if (!p.has_hrep || !p.has_vrep) throw std::invalid_argument("irredundant_halfspaces: needs both representations");
    const int q = p.dim;
    std::vector<Vec> gens;
    for (const auto& v : p.vertices) {
        Vec h(q + 1);
        h << v, 1.0;
        gens.push_back(h);
    }
    for (const auto& r : p.rays) {
        Vec h(q + 1);
        h << r, 0.0;
        gens.push_back(h);
    }
    std::vector<Vec> line_rows;
    for (const auto& l : p.lines) {
        Vec h(q + 1);
        h << l, 0.0;
        line_rows.push_back(h);
    }
    std::vector<Vec> all = gens;
    all.insert(all.end(), line_rows.begin(), line_rows.end());
    const int total = rank_of(all, q + 1);

    std::vector<std::size_t> keep;
    std::vector<std::vector<bool>> seen;
    for (std::size_t i = 0; i < p.halfspaces.size(); ++i) {
        const auto& h = p.halfspaces[i];
        const double n = h.normal.lpNorm<1>();
        Vec a(q + 1);
        a << h.normal / n, -h.offset / n;
        std::vector<bool> sig(gens.size());
        std::vector<Vec> tight = line_rows;
        for (std::size_t k = 0; k < gens.size(); ++k) {
            const double scale = 1.0 + gens[k].head(q).cwiseAbs().maxCoeff();
            if (std::abs(a.dot(gens[k])) <= 1e-8 * scale) {
                sig[k] = true;
                tight.push_back(gens[k]);
            }
        }
        const int r = rank_of(tight, q + 1);
        if (r >= total) {
            keep.push_back(i);
        } else if (r == total - 1) {
            if (std::find(seen.begin(), seen.end(), sig) == seen.end()) {
                seen.push_back(sig);
                keep.push_back(i);
            }
        }
    }
    return keep;
}

// ---------------------------------------------------------------------------
// Cones

PolyCone cone_from_generators(int dim, const std::vector<Vec>& gens) {
    std::vector<Vec> rows;
    for (const auto& g : gens)
        if (g.cwiseAbs().maxCoeff() > 0.0) rows.push_back(g);
    ConeGenerators dual = double_description(stack_rows(rows, dim));
    std::vector<Vec> hrows;
    for (const auto& n : dual.rays) hrows.push_back(n);
    for (const auto& e : dual.lines) {
        hrows.push_back(e);
        hrows.push_back(-e);
    }
    ConeGenerators primal = double_description(stack_rows(hrows, dim));
    return build_cone(dim, std::move(primal.rays), std::move(primal.lines));
}

PolyCone cone_from_normals(int dim, const std::vector<Vec>& normals) {
    std::vector<Vec> rows;
    for (const auto& n : normals)
        if (n.cwiseAbs().maxCoeff() > 0.0) rows.push_back(n);
    ConeGenerators g = double_description(stack_rows(rows, dim));
    return build_cone(dim, std::move(g.rays), std::move(g.lines));
}

PolyCone recession_cone(const Polyhedron& p) {
    if (!p.has_hrep) throw std::invalid_argument("recession_cone: no H-representation");
    std::vector<Vec> normals;
    for (const auto& h : p.halfspaces) normals.push_back(h.normal);
    return cone_from_normals(p.dim, normals);
}

PolyCone dual_cone(const PolyCone& c) {
    PolyCone d;
    d.dim = c.dim;
    d.generators = c.normals;
    d.lines = c.equalities;
    d.normals = c.generators;
    d.equalities = c.lines;
    d.pointed = d.lines.empty();
    d.solid = d.equalities.empty();
    d.nontrivial = !(d.generators.empty() && d.lines.empty()) && !(d.normals.empty() && d.equalities.empty());
    return d;
}

std::vector<Halfspace> l1_ball_halfspaces(int dim) {
    std::vector<Halfspace> hs;
    const int count = 1 << dim;
    for (int mask = 0; mask < count; ++mask) {
        Vec w(dim);
        for (int k = 0; k < dim; ++k) w(k) = (mask >> k) & 1 ? 1.0 : -1.0;
        hs.push_back({w, -1.0});
    }
    return hs;
}

Polyhedron intersect_unit_ball(const PolyCone& c) {
    if (c.dim > 6) throw std::invalid_argument("intersect_unit_ball: dimension above 6");
    std::vector<Halfspace> hs;
    for (const auto& n : c.normals) hs.push_back({n, 0.0});
    for (const auto& e : c.equalities) {
        hs.push_back({e, 0.0});
        hs.push_back({-e, 0.0});
    }
    for (auto& h : l1_ball_halfspaces(c.dim)) hs.push_back(std::move(h));
    return Polyhedron::from_hrep(c.dim, std::move(hs));
}

std::vector<Vec> nonzero_vertices(const Polyhedron& p) {
    std::vector<Vec> verts;
    if (p.has_vrep) {
        verts = p.vertices;
    } else {
        auto v = hrep_to_vrep(p);
        if (!v) return {};
        verts = v->vertices;
    }
    std::vector<Vec> out;
    for (auto& v : verts) {
        if (v.cwiseAbs().maxCoeff() <= kMergeTol) continue;
        v = v.unaryExpr([](double x) { return std::abs(x) <= 1e-12 ? 0.0 : x; });
        const double n = v.lpNorm<1>();
        out.push_back(std::abs(n - 1.0) <= kContainTol ? Vec(v / n) : v);
    }
    return unique_points(std::move(out));
}

bool contains_point(const Polyhedron& p, const Vec& y, double tol) {
    if (!p.has_hrep) throw std::invalid_argument("contains_point: no H-representation");
    for (const auto& h : p.halfspaces)
        if (h.normal.dot(y) < h.offset - tol) return false;
    return true;
}

double l1_distance_point_to_set(const Vec& y, const Polyhedron& p) {
    if (!p.has_hrep) throw std::invalid_argument("l1_distance_point_to_set: no H-representation");
    const int q = p.dim;
    const int m = static_cast<int>(p.halfspaces.size());
    LinearProgram lp;
    lp.c = Vec::Zero(2 * q);
    lp.c.tail(q).setOnes();
    lp.A = Mat::Zero(2 * q + m, 2 * q);
    lp.b = Vec::Zero(2 * q + m);
    lp.nonneg.assign(2 * q, false);
    for (int k = 0; k < q; ++k) {
        lp.nonneg[q + k] = true;
        lp.A(k, k) = 1.0;
        lp.A(k, q + k) = 1.0;
        lp.b(k) = y(k);
        lp.A(q + k, k) = -1.0;
        lp.A(q + k, q + k) = 1.0;
        lp.b(q + k) = -y(k);
    }
    for (int i = 0; i < m; ++i) {
        lp.A.row(2 * q + i).head(q) = p.halfspaces[i].normal.transpose();
        lp.b(2 * q + i) = p.halfspaces[i].offset;
    }
    auto r = solve_lp(lp);
    if (r.status != LpStatus::Optimal) return std::numeric_limits<double>::infinity();
    return std::max(0.0, r.value);
}

double l1_distance_to_hull(const Vec& y, const std::vector<Vec>& vertices, const std::vector<Vec>& rays) {
    if (vertices.empty()) return std::numeric_limits<double>::infinity();
    const int q = static_cast<int>(y.size());
    const int nv = static_cast<int>(vertices.size());
    const int nr = static_cast<int>(rays.size());
    const int nvar = nv + nr + q;
    LinearProgram lp;
    lp.c = Vec::Zero(nvar);
    lp.c.tail(q).setOnes();
    lp.A = Mat::Zero(2 * q + 1, nvar);
    lp.b = Vec::Zero(2 * q + 1);
    lp.nonneg.assign(nvar, true);
    lp.equality.assign(2 * q + 1, false);
    for (int k = 0; k < q; ++k) {
        for (int j = 0; j < nv; ++j) {
            lp.A(k, j) = vertices[j](k);
            lp.A(q + k, j) = -vertices[j](k);
        }
        for (int j = 0; j < nr; ++j) {
            lp.A(k, nv + j) = rays[j](k);
            lp.A(q + k, nv + j) = -rays[j](k);
        }
        lp.A(k, nv + nr + k) = 1.0;
        lp.A(q + k, nv + nr + k) = 1.0;
        lp.b(k) = y(k);
        lp.b(q + k) = -y(k);
    }
    for (int j = 0; j < nv; ++j) lp.A(2 * q, j) = 1.0;
    lp.b(2 * q) = 1.0;
    lp.equality[2 * q] = true;
    auto r = solve_lp(lp);
    if (r.status != LpStatus::Optimal) return std::numeric_limits<double>::infinity();
    return std::max(0.0, r.value);
}

double hausdorff_cone_distance(const PolyCone& a, const PolyCone& b) {
    const Polyhedron pa = intersect_unit_ball(a);
    const Polyhedron pb = intersect_unit_ball(b);
    const auto va = hrep_to_vrep(pa);
    const auto vb = hrep_to_vrep(pb);
    double h = 0.0;
    for (const auto& v : va->vertices) h = std::max(h, l1_distance_point_to_set(v, pb));
    for (const auto& v : vb->vertices) h = std::max(h, l1_distance_point_to_set(v, pa));
    return h;
}

}  // namespace cvop
