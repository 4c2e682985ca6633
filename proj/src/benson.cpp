#include "cvop/benson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cvop/log.hpp"

namespace cvop {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Done: return "done";
        case SolveStatus::Bounded: return "bounded";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::SlaterFailure: return "slater_failure";
        case SolveStatus::IterationLimit: return "iteration_limit";
        case SolveStatus::DualRedirect: return "dual_redirect";
        case SolveStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

namespace {

// Copies the recession cone approximation into a solution; returns false if the run must stop here.
bool adopt(EpsDeltaSolution& sol, const ConeApproximation& a) {
    sol.approx = a;
    sol.xbar = a.xbar;
    sol.tbar = a.tbar;
    sol.y_out = a.y_out;
    sol.y_in = a.y_in;
    sol.scalarizations = a.scalarizations;
    switch (a.status) {
        case RecessionStatus::Infeasible: sol.status = SolveStatus::Infeasible; return false;
        case RecessionStatus::SlaterFailure: sol.status = SolveStatus::SlaterFailure; return false;
        case RecessionStatus::IterationLimit:
            sol.status = SolveStatus::IterationLimit;
            sol.message = "recession cone approximation hit the iteration cap";
            return false;
        default: return true;
    }
}

Polyhedron irredundant(const Polyhedron& p) {
    auto v = hrep_to_vrep(p);
    if (!v) return p;
    auto idx = irredundant_halfspaces(*v);
    std::vector<Halfspace> hs;
    for (auto i : idx) hs.push_back(v->halfspaces[i]);
    Polyhedron out = *v;
    out.halfspaces = std::move(hs);
    return out;
}

Polyhedron inner_approximation(const ProblemSpec& spec, const std::vector<Vec>& xbar, const std::vector<Vec>& y_in) {
    std::vector<Vec> pts;
    for (const auto& x : xbar) pts.push_back(spec.objective_values(x));
    return Polyhedron::from_vrep(spec.q, std::move(pts), y_in);
}

}  // namespace

bool add_unique_cut(std::vector<Halfspace>& cuts, const Halfspace& h) {
    const double n = h.normal.lpNorm<1>();
    const Vec hn = h.normal / n;
    const double ho = h.offset / n;
    for (const auto& c : cuts) {
        const double cn = c.normal.lpNorm<1>();
        if ((c.normal / cn - hn).cwiseAbs().maxCoeff() <= kMergeTol && ho <= c.offset / cn + kMergeTol) return false;
    }
    cuts.push_back(h);
    return true;
}

EpsDeltaSolution solve_primal(const ProblemSpec& spec, const BensonOptions& opts) {
    EpsDeltaSolution sol;
    sol.epsilon = opts.epsilon;
    sol.delta = opts.recession.delta;
    ScalarSolver solver(spec, opts.recession.solver);
    const TMatrix T = TMatrix::standard(spec.cone.c);
    if (!adopt(sol, approximate_recession_cone(solver, T, opts.recession))) return sol;

    const Vec d = -spec.cone.c;
    sol.cuts = sol.approx.cuts;
    bool converged = false;
    try {
        while (sol.rounds < opts.max_rounds) {
            ++sol.rounds;
            auto P = hrep_to_vrep(Polyhedron::from_hrep(spec.q, sol.cuts));
            if (!P) throw NumericalFailure("outer approximation became empty");
            std::vector<Halfspace> fresh;
            sol.max_gap = 0.0;
            for (const auto& v : P->vertices) {
                auto o = solver.pascoletti_serafini(v, d);
                if (o.status != ScalarStatus::Optimal)
                    throw NumericalFailure("P2 at an outer vertex returned " + to_string(o.status) + " " + o.message);
                const Vec y = spec.objective_values(o.x);
                sol.xbar.push_back(o.x);
                sol.tbar.push_back(T.t_of_w(o.w));
                const double gap = -o.z;
                sol.max_gap = std::max(sol.max_gap, gap);
                if (gap > opts.epsilon) {
                    const Halfspace h{o.w, o.w.dot(y)};
                    std::vector<Halfspace> probe = sol.cuts;
                    if (add_unique_cut(probe, h)) add_unique_cut(fresh, h);
                }
            }
            log::info("primal round " + std::to_string(sol.rounds) + ": " + std::to_string(P->vertices.size()) +
                      " vertices, " + std::to_string(fresh.size()) + " cuts, max gap " + std::to_string(sol.max_gap));
            if (fresh.empty()) {
                converged = true;
                break;
            }
            sol.cuts_per_round.push_back(fresh.size());
            sol.cuts.insert(sol.cuts.end(), fresh.begin(), fresh.end());
        }
    } catch (const NumericalFailure& e) {
        sol.status = SolveStatus::NumericalFailure;
        sol.message = e.what();
        sol.scalarizations = solver.solves();
        return sol;
    }
    sol.status = converged ? SolveStatus::Done : SolveStatus::IterationLimit;
    if (!converged) sol.message = "primal algorithm hit the round cap";
    sol.scalarizations = solver.solves();
    sol.outer = irredundant(Polyhedron::from_hrep(spec.q, sol.cuts));
    sol.inner = inner_approximation(spec, sol.xbar, sol.y_in);
    return sol;
}

std::vector<Vec> unbounded_dual_directions(ScalarSolver& solver, const std::vector<Vec>& y_out) {
    const int q = solver.spec().q;
    const PolyCone K = cone_from_generators(q, y_out);
    std::vector<Vec> bad;
    for (const auto& w : K.normals) {
        auto o = solver.weighted_sum(w);
        if (o.status == ScalarStatus::NumericalFailure) throw NumericalFailure("P1 failed: " + o.message);
        if (o.status == ScalarStatus::Unbounded) bad.push_back(w);
    }
    return bad;
}

std::vector<Halfspace> initial_dual_halfspaces(const ProblemSpec& spec, const TMatrix& T, const std::vector<Vec>& y_out,
                                               const std::vector<Vec>& xbar) {
    const int q = spec.q;
    std::vector<Halfspace> hs;
    for (const auto& y : y_out) {
        const Vec u = T.Tinv * y;
        Vec n = u;
        n(q - 1) = 0.0;
        if (n.cwiseAbs().maxCoeff() <= kMergeTol) continue;
        hs.push_back({n, -u(q - 1)});
    }
    for (const auto& x : xbar) {
        const Vec u = T.Tinv * spec.objective_values(x);
        Vec n = u;
        n(q - 1) = -1.0;
        add_unique_cut(hs, {n, -u(q - 1)});
    }
    return hs;
}

EpsDeltaSolution solve_dual(const ProblemSpec& spec, const BensonOptions& opts) {
    ScalarSolver solver(spec, opts.recession.solver);
    const TMatrix T = TMatrix::standard(spec.cone.c);
    ConeApproximation a = approximate_recession_cone(solver, T, opts.recession);
    return solve_dual(solver, T, a, opts);
}

EpsDeltaSolution solve_dual(ScalarSolver& solver, const TMatrix& T, const ConeApproximation& approx,
                            const BensonOptions& opts) {
    const ProblemSpec& spec = solver.spec();
    const int q = spec.q;
    EpsDeltaSolution sol;
    sol.epsilon = opts.epsilon;
    sol.delta = opts.recession.delta;
    if (!adopt(sol, approx)) return sol;

    bool converged = false;
    try {
        // Step 2
        auto bad = unbounded_dual_directions(solver, sol.y_out);
        if (!bad.empty()) {
            std::ostringstream os;
            os << "weighted-sum problem unbounded for " << bad.size()
               << " extreme direction(s) of the dual of cone Y_Out; use the primal algorithm";
            sol.status = SolveStatus::DualRedirect;
            sol.message = os.str();
            sol.scalarizations = solver.solves();
            log::warn(sol.message);
            return sol;
        }

        sol.cuts = initial_dual_halfspaces(spec, T, sol.y_out, sol.xbar);
        while (sol.rounds < opts.max_rounds) {
            ++sol.rounds;
            auto D = hrep_to_vrep(Polyhedron::from_hrep(q, sol.cuts));
            if (!D) throw NumericalFailure("dual outer approximation became empty");
            for (const auto& r : D->rays)
                if (r(q - 1) > kMergeTol) throw NumericalFailure("dual region has a ray with positive last coordinate");
            for (const auto& l : D->lines)
                if (std::abs(l(q - 1)) > kMergeTol) throw NumericalFailure("dual region has a vertical line");
            std::vector<Halfspace> fresh;
            sol.max_gap = 0.0;
            for (const auto& t : D->vertices) {
                const Vec w = T.w_of_t(t);
                auto o = solver.weighted_sum(w);
                if (o.status != ScalarStatus::Optimal)
                    throw NumericalFailure("P1 at a dual vertex returned " + to_string(o.status) + " " + o.message);
                const Vec y = spec.objective_values(o.x);
                sol.xbar.push_back(o.x);
                sol.tbar.push_back(T.t_of_w(w));
                const double gap = t(q - 1) - w.dot(y);
                sol.max_gap = std::max(sol.max_gap, gap);
                if (gap > opts.epsilon) {
                    const Vec u = T.Tinv * y;
                    Vec n = u;
                    n(q - 1) = -1.0;
                    const Halfspace h{n, -u(q - 1)};
                    std::vector<Halfspace> probe = sol.cuts;
                    if (add_unique_cut(probe, h)) add_unique_cut(fresh, h);
                }
            }
            log::info("dual round " + std::to_string(sol.rounds) + ": " + std::to_string(D->vertices.size()) +
                      " vertices, " + std::to_string(fresh.size()) + " cuts, max gap " + std::to_string(sol.max_gap));
            if (fresh.empty()) {
                converged = true;
                sol.dual_region = *D;
                break;
            }
            sol.cuts_per_round.push_back(fresh.size());
            sol.cuts.insert(sol.cuts.end(), fresh.begin(), fresh.end());
        }
    } catch (const NumericalFailure& e) {
        sol.status = SolveStatus::NumericalFailure;
        sol.message = e.what();
        sol.scalarizations = solver.solves();
        return sol;
    }
    sol.status = converged ? SolveStatus::Done : SolveStatus::IterationLimit;
    if (!converged) {
        sol.message = "dual algorithm hit the round cap";
        sol.dual_region = Polyhedron::from_hrep(q, sol.cuts);
    }
    sol.scalarizations = solver.solves();

    // Outer approximation of the upper image from the supporting halfspaces found.
    std::vector<Halfspace> ys;
    for (std::size_t i = 0; i < sol.tbar.size() && i < sol.xbar.size(); ++i) {
        const Vec w = T.w_of_t(sol.tbar[i]);
        add_unique_cut(ys, {w, w.dot(spec.objective_values(sol.xbar[i]))});
    }
    sol.outer = irredundant(Polyhedron::from_hrep(q, ys));
    sol.inner = inner_approximation(spec, sol.xbar, sol.y_in);
    return sol;
}

CertificationReport certify_solution(const ProblemSpec& spec, const EpsDeltaSolution& sol,
                                     const std::vector<Vec>& samples, double tol) {
    CertificationReport rep;
    std::vector<Vec> pts;
    for (const auto& x : sol.xbar) {
        for (const auto& g : spec.constraints) {
            double gv = 0.0;
            try {
                gv = evaluate(*g, x);
            } catch (const DomainError&) {
                gv = std::numeric_limits<double>::infinity();
            }
            if (gv > 1e-6) rep.xbar_feasible = false;
        }
        pts.push_back(spec.objective_values(x));
    }
    pts = unique_points(std::move(pts));
    const Vec shift = sol.epsilon * spec.cone.c;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double dist = l1_distance_to_hull(samples[i] + shift, pts, sol.y_out);
        if (dist > rep.worst) {
            rep.worst = dist;
            rep.worst_index = static_cast<int>(i);
        }
    }
    rep.ok = rep.xbar_feasible && rep.worst <= tol;
    std::ostringstream os;
    os << "worst slack " << rep.worst;
    if (rep.worst_index >= 0) os << " at sample " << rep.worst_index;
    if (!rep.xbar_feasible) os << "; some weak minimizer is infeasible";
    rep.message = os.str();
    return rep;
}

}  // namespace cvop
