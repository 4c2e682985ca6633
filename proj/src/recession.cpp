#include "cvop/recession.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvop/log.hpp"

namespace cvop {

std::string to_string(RecessionStatus s) {
    switch (s) {
        case RecessionStatus::Done: return "done";
        case RecessionStatus::Bounded: return "bounded";
        case RecessionStatus::Infeasible: return "infeasible";
        case RecessionStatus::SlaterFailure: return "slater_failure";
        case RecessionStatus::IterationLimit: return "iteration_limit";
    }
    return "unknown";
}

std::string to_string(LoopAction a) {
    switch (a) {
        case LoopAction::Accept: return "accept";
        case LoopAction::InnerUpdate: return "inner_update";
        case LoopAction::Cut: return "cut";
    }
    return "unknown";
}

TMatrix TMatrix::standard(const Vec& c) {
    const auto q = c.size();
    for (Eigen::Index skip = q - 1; skip >= 0; --skip) {
        TMatrix tm;
        tm.T = Mat::Zero(q, q);
        Eigen::Index col = 0;
        for (Eigen::Index k = 0; k < q; ++k) {
            if (k == skip) continue;
            tm.T(k, col++) = 1.0;
        }
        tm.T.col(q - 1) = c;
        if (std::abs(tm.T.determinant()) > 1e-12) {
            tm.Tinv = tm.T.inverse();
            return tm;
        }
    }
    throw std::invalid_argument("TMatrix: c is zero");
}

Vec TMatrix::w_of_t(const Vec& t) const {
    Vec s = t;
    s(s.size() - 1) = 1.0;
    return Tinv.transpose() * s;
}

Vec TMatrix::t_of_w(const Vec& w) const {
    const Vec c = T.col(T.cols() - 1);
    return T.transpose() * (w / c.dot(w));
}

namespace {

std::string fmt_vec(const Vec& v) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
    os << ")";
    return os.str();
}

bool member(const Vec& d, const std::vector<Vec>& set) {
    for (const auto& s : set)
        if ((d - s).lpNorm<1>() <= kContainTol) return true;
    return false;
}

std::vector<Vec> outer_directions(int q, const std::vector<Halfspace>& cuts) {
    std::vector<Vec> normals;
    for (const auto& h : cuts) normals.push_back(h.normal);
    return nonzero_vertices(intersect_unit_ball(cone_from_normals(q, normals)));
}

void add_cut(ConeApproximation& a, const Vec& w, const Vec& y) { a.cuts.push_back({w, w.dot(y)}); }

}  // namespace

ConeApproximation approximate_recession_cone(const ProblemSpec& spec, const TMatrix& T, const RecessionOptions& opts) {
    ScalarSolver solver(spec, opts.solver);
    return approximate_recession_cone(solver, T, opts);
}

ConeApproximation approximate_recession_cone(ScalarSolver& solver, const TMatrix& T, const RecessionOptions& opts) {
    const ProblemSpec& spec = solver.spec();
    const auto& R = spec.cone.R;
    const auto& Rstar = spec.cone.Rstar;
    ConeApproximation a;
    a.q = spec.q;

    // Step 1
    a.y_in = R;
    bool bounded = true;

    // Step 2
    const auto& feas = solver.feasibility();
    a.phase1_value = feas.s;
    if (feas.status == FeasibilityStatus::Infeasible) {
        a.status = RecessionStatus::Infeasible;
        log::info("problem is infeasible");
        return a;
    }
    if (feas.status == FeasibilityStatus::SlaterFailure) {
        a.status = RecessionStatus::SlaterFailure;
        log::info("feasible set has no strictly feasible point");
        return a;
    }
    a.x0 = feas.x0;
    a.v = spec.objective_values(a.x0);
    for (const auto& r : R) a.v += r;
    log::info("interior point v = " + fmt_vec(a.v));

    // Step 3
    for (const auto& z : Rstar) {
        auto o = solver.weighted_sum(z);
        if (o.status == ScalarStatus::NumericalFailure) throw NumericalFailure("P1 failed: " + o.message);
        if (o.status == ScalarStatus::Unbounded) {
            bounded = false;
            log::trace("P1" + fmt_vec(z) + " unbounded");
            continue;
        }
        a.xbar.push_back(o.x);
        a.tbar.push_back(T.t_of_w(z));
        add_cut(a, z, spec.objective_values(o.x));
    }

    // Step 4
    if (bounded) {
        a.status = RecessionStatus::Bounded;
        a.y_out = R;
        a.scalarizations = solver.solves();
        a.snapshots.push_back({0, a.y_in, a.y_out, a.c_hat});
        log::info("problem is bounded");
        return a;
    }

    // Step 5
    for (const auto& r : R) {
        const Vec d = -r;
        auto o = solver.pascoletti_serafini(a.v, d);
        if (o.status == ScalarStatus::Unbounded) {
            a.y_in.push_back(d);
        } else if (o.status == ScalarStatus::Optimal) {
            a.xbar.push_back(o.x);
            a.tbar.push_back(T.t_of_w(o.w));
            add_cut(a, o.w, spec.objective_values(o.x));
        } else {
            throw NumericalFailure("P2 failed in the lineality check: " + o.message);
        }
    }

    // Step 6
    a.y_out = outer_directions(a.q, a.cuts);
    a.snapshots.push_back({0, a.y_in, a.y_out, a.c_hat});

    // Step 7
    const double lambda = opts.solver.lambda;
    for (;;) {
        std::vector<Vec> cand;
        for (const auto& d : a.y_out)
            if (!member(d, a.y_in) && !member(d, a.c_hat)) cand.push_back(d);
        if (cand.empty()) {
            a.status = RecessionStatus::Done;
            break;
        }
        if (a.iterations >= opts.max_iter) {
            a.status = RecessionStatus::IterationLimit;
            log::warn("recession loop hit the iteration cap");
            break;
        }
        ++a.iterations;
        const Vec d = *std::max_element(cand.begin(), cand.end(), lex_less);
        const auto [idx, dist] = nearest_l1(d, a.y_in);
        IterationRecord rec;
        rec.iter = a.iterations;
        rec.d = d;
        rec.r_tilde = a.y_in[idx];
        rec.dist = dist;
        if (dist <= opts.delta) {
            rec.action = LoopAction::Accept;
            a.c_hat.push_back(d);
        } else {
            const Vec dd = lambda * d + (1.0 - lambda) * rec.r_tilde;
            auto o = solver.pascoletti_serafini(a.v, dd);
            if (o.status == ScalarStatus::Unbounded) {
                rec.action = LoopAction::InnerUpdate;
                rec.added = l1_normalized(dd);
                a.y_in.push_back(rec.added);
            } else if (o.status == ScalarStatus::Optimal) {
                rec.action = LoopAction::Cut;
                rec.added = dd;
                a.xbar.push_back(o.x);
                a.tbar.push_back(T.t_of_w(o.w));
                add_cut(a, o.w, spec.objective_values(o.x));
                a.y_out = outer_directions(a.q, a.cuts);
                rec.new_y_out = a.y_out;
            } else {
                throw NumericalFailure("P2 failed in the refinement loop for d = " + fmt_vec(dd) + ": " + o.message);
            }
        }
        log::trace("iter " + std::to_string(rec.iter) + " d=" + fmt_vec(d) + " r=" + fmt_vec(rec.r_tilde) +
                   " dist=" + std::to_string(dist) + " " + to_string(rec.action));
        a.log.push_back(std::move(rec));
        a.snapshots.push_back({a.iterations, a.y_in, a.y_out, a.c_hat});
    }
    a.scalarizations = solver.solves();
    log::info("recession cone approximation: " + to_string(a.status) + " after " + std::to_string(a.iterations) +
              " iterations");
    return a;
}

DeltaReport certify_delta(const std::vector<Vec>& y_in, const std::vector<Vec>& y_out, double delta) {
    DeltaReport rep;
    if (y_in.empty() || y_out.empty()) {
        rep.ok = false;
        rep.message = "empty direction set";
        return rep;
    }
    const int q = static_cast<int>(y_in.front().size());
    rep.angle_bound = std::acos(std::clamp(1.0 - q * delta * delta / 2.0, -1.0, 1.0));
    const PolyCone cin = cone_from_generators(q, y_in);
    const PolyCone cout = cone_from_generators(q, y_out);
    for (const auto& r : y_in)
        if (!cout.contains(r)) rep.inner_in_outer = false;
    rep.distance = hausdorff_cone_distance(cin, cout);
    for (std::size_t i = 0; i < y_out.size(); ++i) {
        if (nearest_l1(y_out[i], y_in).second > delta + kContainTol) {
            rep.offending = static_cast<int>(i);
            break;
        }
    }
    std::ostringstream os;
    if (!rep.inner_in_outer) os << "cone Y_In is not contained in cone Y_Out; ";
    if (rep.offending >= 0) os << "direction " << fmt_vec(y_out[static_cast<std::size_t>(rep.offending)]) << " has no inner direction within delta; ";
    if (rep.distance > delta + kContainTol) os << "Hausdorff distance " << rep.distance << " exceeds delta " << delta;
    rep.message = os.str();
    rep.ok = rep.inner_in_outer && rep.offending < 0 && rep.distance <= delta + kContainTol;
    return rep;
}

}  // namespace cvop
