#include "cvop/scalarization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvop/log.hpp"

namespace cvop {

std::string to_string(ScalarStatus s) {
    switch (s) {
        case ScalarStatus::Optimal: return "optimal";
        case ScalarStatus::Unbounded: return "unbounded";
        case ScalarStatus::Infeasible: return "infeasible";
        case ScalarStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

namespace {

struct PhaseOne {
    FeasibilityStatus status = FeasibilityStatus::Infeasible;
    Vec u;
    double s = 0.0;
};

double max_value(const std::vector<ExprPtr>& fs, const Vec& u) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& f : fs) m = std::max(m, evaluate(*f, u));
    return m;
}

// minimize s + reg/2 |u|^2  s.t.  hard(u) <= 0, soft(u) <= s, s >= -1.
// `start` must satisfy the hard constraints strictly.
PhaseOne phase_one(int dim, const std::vector<ExprPtr>& hard, const std::vector<ExprPtr>& soft, const Vec& start,
                   const SolverOptions& opts) {
    PhaseOne out;
    if (soft.empty()) {
        out.status = FeasibilityStatus::StrictlyFeasible;
        out.u = start;
        out.s = -1.0;
        return out;
    }
    const int sidx = dim + 1;
    BarrierProblem bp;
    bp.dim = dim + 1;
    std::vector<ExprPtr> reg_terms;
    for (int k = 1; k <= dim; ++k) reg_terms.push_back(Expr::square(affine_expr({{k, 1.0}})));
    bp.objective = Expr::sum({affine_expr({{sidx, 1.0}}), Expr::scale(opts.phase1_reg / 2.0, Expr::sum(reg_terms))});
    for (const auto& h : hard) bp.constraints.push_back(h);
    for (const auto& g : soft) bp.constraints.push_back(Expr::sum({g, affine_expr({{sidx, -1.0}})}));
    bp.constraints.push_back(affine_expr({{sidx, -1.0}}, -1.0));

    Vec u0(dim + 1);
    u0.head(dim) = start;
    double s0 = 0.0;
    try {
        s0 = max_value(soft, start);
    } catch (const DomainError&) {
        throw NumericalFailure("phase I start lies outside the domain of a constraint");
    }
    u0(dim) = std::max(s0 + 1.0, -0.5);
    SolverOptions o = opts;
    o.cap = std::max(opts.cap, 1e12);
    auto r = barrier_minimize(bp, u0, o);
    if (r.status == BarrierStatus::NumericalFailure && r.u.size() == 0) throw NumericalFailure("phase I: " + r.message);
    out.u = r.u.head(dim);
    out.s = max_value(soft, out.u);
    if (out.s < -opts.tol)
        out.status = FeasibilityStatus::StrictlyFeasible;
    else if (out.s > opts.tol)
        out.status = FeasibilityStatus::Infeasible;
    else
        out.status = FeasibilityStatus::SlaterFailure;
    return out;
}

bool strictly_feasible(const ProblemSpec& spec, const Vec& x) {
    try {
        for (const auto& g : spec.constraints)
            if (!(evaluate(*g, x) < 0.0)) return false;
    } catch (const DomainError&) {
        return false;
    }
    return true;
}

ScalarOutcome from_failure(const BarrierResult& r) {
    ScalarOutcome o;
    o.status = ScalarStatus::NumericalFailure;
    o.message = r.message;
    return o;
}

}  // namespace

FeasibilityResult check_feasibility(const ProblemSpec& spec, const SolverOptions& opts) {
    FeasibilityResult res;
    const Vec zero = Vec::Zero(spec.n);
    if (spec.constraints.empty()) {
        res.status = FeasibilityStatus::StrictlyFeasible;
        res.x0 = spec.start ? *spec.start : zero;
        res.s = -1.0;
        return res;
    }
    if (spec.start) {
        if (strictly_feasible(spec, *spec.start)) {
            res.status = FeasibilityStatus::StrictlyFeasible;
            res.x0 = *spec.start;
            res.s = max_value(spec.constraints, res.x0);
            log::info("phase I: using the start point from the problem file");
            return res;
        }
        log::info("phase I: start point is not strictly feasible, solving phase I");
    }
    std::vector<ExprPtr> affine, nonlinear;
    for (const auto& g : spec.constraints) (g->curvature() == Curvature::Affine ? affine : nonlinear).push_back(g);

    Vec x = spec.start ? *spec.start : zero;
    auto p1 = phase_one(spec.n, {}, affine, x, opts);
    if (p1.status != FeasibilityStatus::StrictlyFeasible) {
        res.status = p1.status;
        res.x0 = p1.u;
        res.s = p1.s;
        return res;
    }
    auto p2 = phase_one(spec.n, affine, nonlinear, p1.u, opts);
    res.status = p2.status;
    res.x0 = p2.u;
    if (res.status == FeasibilityStatus::StrictlyFeasible) {
        res.s = max_value(spec.constraints, res.x0);
        if (!strictly_feasible(spec, res.x0)) res.status = FeasibilityStatus::SlaterFailure;
    } else {
        res.s = p2.s;
    }
    return res;
}

ScalarOutcome solve_weighted_sum(const ProblemSpec& spec, const Vec& w, const Vec& x0, const SolverOptions& opts) {
    BarrierProblem bp;
    bp.dim = spec.n;
    bp.objective = weighted_sum(spec.objectives, w);
    bp.constraints = spec.constraints;
    auto r = barrier_minimize(bp, x0, opts);
    ScalarOutcome o;
    switch (r.status) {
        case BarrierStatus::Unbounded:
            o.status = ScalarStatus::Unbounded;
            o.x = r.u;
            o.value = -std::numeric_limits<double>::infinity();
            o.message = r.message;
            return o;
        case BarrierStatus::NumericalFailure: return from_failure(r);
        case BarrierStatus::Optimal: break;
    }
    o.status = ScalarStatus::Optimal;
    o.x = r.u;
    o.value = w.dot(spec.objective_values(r.u));
    o.attained = r.attained;
    return o;
}

bool detect_unbounded_direction(const ProblemSpec& spec, const Vec& w, const Vec& x0, const SolverOptions& opts) {
    auto o = solve_weighted_sum(spec, w, x0, opts);
    if (o.status == ScalarStatus::NumericalFailure) throw NumericalFailure("P1 failed: " + o.message);
    return o.status == ScalarStatus::Unbounded;
}

ScalarOutcome solve_pascoletti_serafini(const ProblemSpec& spec, const Vec& v, const Vec& d, const Vec& x0,
                                        const SolverOptions& opts) {
    const int n = spec.n;
    const int zi = n + 1;
    const auto& Rs = spec.cone.Rstar;
    BarrierProblem bp;
    bp.dim = n + 1;
    bp.objective = affine_expr({{zi, -1.0}});
    bp.constraints = spec.constraints;
    std::vector<ExprPtr> cone_rows;
    for (const auto& zj : Rs)
        cone_rows.push_back(Expr::sum({weighted_sum(spec.objectives, zj), affine_expr({{zi, -zj.dot(d)}}, -zj.dot(v))}));
    for (const auto& c : cone_rows) bp.constraints.push_back(c);

    // Strictly feasible z for the fixed x0: a_j - z b_j < 0 for every j.
    const Vec y0 = spec.objective_values(x0);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool empty = false;
    for (const auto& zj : Rs) {
        const double a = zj.dot(y0 - v);
        const double b = zj.dot(d);
        if (std::abs(b) <= 1e-14) {
            if (a >= 0.0) empty = true;
        } else if (b > 0.0) {
            lo = std::max(lo, a / b);
        } else {
            hi = std::min(hi, a / b);
        }
    }
    Vec u0(n + 1);
    u0.head(n) = x0;
    if (!empty && lo < hi) {
        if (std::isfinite(lo) && std::isfinite(hi))
            u0(n) = 0.5 * (lo + hi);
        else if (std::isfinite(lo))
            u0(n) = lo + 1.0;
        else if (std::isfinite(hi))
            u0(n) = hi - 1.0;
        else
            u0(n) = 0.0;
    } else {
        u0(n) = 0.0;
        std::vector<ExprPtr> hard = spec.constraints;
        auto p1 = phase_one(n + 1, hard, cone_rows, u0, opts);
        if (p1.status == FeasibilityStatus::Infeasible) {
            ScalarOutcome o;
            o.status = ScalarStatus::Infeasible;
            o.message = "P2 has no feasible point";
            return o;
        }
        if (p1.status == FeasibilityStatus::SlaterFailure) {
            ScalarOutcome o;
            o.status = ScalarStatus::NumericalFailure;
            o.message = "P2 has no strictly feasible point";
            return o;
        }
        u0 = p1.u;
    }

    auto r = barrier_minimize(bp, u0, opts);
    ScalarOutcome o;
    switch (r.status) {
        case BarrierStatus::Unbounded:
            o.status = ScalarStatus::Unbounded;
            o.x = r.u.head(n);
            o.z = r.u(n);
            o.value = std::numeric_limits<double>::infinity();
            o.message = r.message;
            return o;
        case BarrierStatus::NumericalFailure: return from_failure(r);
        case BarrierStatus::Optimal: break;
    }
    o.x = r.u.head(n);
    o.z = r.u(n);
    o.value = o.z;
    o.attained = r.attained;
    const auto ng = static_cast<Eigen::Index>(spec.constraints.size());
    Vec w = Vec::Zero(spec.q);
    for (std::size_t j = 0; j < Rs.size(); ++j) w += r.multipliers(ng + static_cast<Eigen::Index>(j)) * Rs[j];
    const double wd = w.dot(d);
    if (std::abs(wd) <= 1e-12) {
        o.status = ScalarStatus::NumericalFailure;
        o.message = "multiplier normalization failed (w'd = 0)";
        return o;
    }
    o.w = w / -wd;
    o.status = ScalarStatus::Optimal;
    return o;
}

ScalarSolver::ScalarSolver(const ProblemSpec& spec, SolverOptions opts) : spec_(spec), opts_(opts) {}

const FeasibilityResult& ScalarSolver::feasibility() {
    if (!feas_) feas_ = check_feasibility(spec_, opts_);
    return *feas_;
}

const Vec& ScalarSolver::x0() {
    const auto& f = feasibility();
    if (f.status != FeasibilityStatus::StrictlyFeasible) throw NumericalFailure("no strictly feasible point available");
    return f.x0;
}

ScalarOutcome ScalarSolver::weighted_sum(const Vec& w) {
    ++solves_;
    return solve_weighted_sum(spec_, w, x0(), opts_);
}

ScalarOutcome ScalarSolver::pascoletti_serafini(const Vec& v, const Vec& d) {
    ++solves_;
    return solve_pascoletti_serafini(spec_, v, d, x0(), opts_);
}

}  // namespace cvop
