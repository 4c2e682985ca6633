#include "cvop/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvop {

namespace {

constexpr double kCenterTol = 1e-10;
constexpr double kRoundoff = 1e-13;
constexpr double kMachineLevel = 1e-16;
constexpr double kMinStep = 1e-12;

struct PhiValue {
    bool ok = false;
    double phi = 0.0;
    double f0 = 0.0;
};

PhiValue phi_at(const BarrierProblem& p, const Vec& u, double t) {
    PhiValue r;
    try {
        r.f0 = smoothed_value(*p.objective, u);
        if (!std::isfinite(r.f0)) return r;
        r.phi = t * r.f0;
        for (const auto& c : p.constraints) {
            const double g = smoothed_value(*c, u);
            if (!std::isfinite(g) || !(g < 0.0)) return r;
            r.phi -= std::log(-g);
        }
    } catch (const DomainError&) {
        return r;
    }
    r.ok = std::isfinite(r.phi);
    return r;
}

Vec newton_direction(const Mat& H, const Vec& g) {
    const Eigen::Index n = g.size();
    double reg = 0.0;
    const double base = 1e-12 * (1.0 + H.cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 30; ++attempt) {
        Eigen::LLT<Mat> llt(H + reg * Mat::Identity(n, n));
        if (llt.info() == Eigen::Success) {
            Vec dx = llt.solve(-g);
            if (dx.allFinite() && g.dot(dx) < 0.0) return dx;
        }
        reg = reg == 0.0 ? base : reg * 100.0;
    }
    return -g;
}

}  // namespace

ExprPtr affine_expr(const std::vector<std::pair<int, double>>& terms, double offset) {
    AffineForm f;
    for (const auto& t : terms)
        if (t.second != 0.0) f.terms.push_back(t);
    f.offset = offset;
    return Expr::affine(std::move(f));
}

BarrierResult barrier_minimize(const BarrierProblem& p, const Vec& u0, const SolverOptions& opts) {
    BarrierResult res;
    // Box |u_i| <= 10 cap keeps every centering problem bounded.
    BarrierProblem bp = p;
    const double box = 10.0 * opts.cap;
    for (int k = 1; k <= p.dim; ++k) {
        bp.constraints.push_back(affine_expr({{k, 1.0}}, -box));
        bp.constraints.push_back(affine_expr({{k, -1.0}}, -box));
    }
    const auto m = static_cast<double>(bp.constraints.size());
    Vec u = u0;
    double t = opts.t0;
    PhiValue cur = phi_at(bp, u, t);
    if (!cur.ok) {
        res.u = u;
        res.message = "starting point is not strictly feasible";
        return res;
    }
    double last_dec = std::numeric_limits<double>::infinity();
    for (int stage = 0; stage < opts.max_outer; ++stage) {
        cur = phi_at(bp, u, t);
        last_dec = std::numeric_limits<double>::infinity();
        for (int it = 0; it < opts.max_newton; ++it) {
            SecondOrder o = second_order(*bp.objective, u);
            Vec g = t * o.gradient;
            Mat H = t * o.hessian;
            for (const auto& c : bp.constraints) {
                SecondOrder s = second_order(*c, u);
                const double r = -s.value;
                g += s.gradient / r;
                H += (s.gradient * s.gradient.transpose()) / (r * r) + s.hessian / r;
            }
            const Vec dx = newton_direction(H, g);
            last_dec = -g.dot(dx);
            if (last_dec / 2.0 <= kCenterTol || last_dec <= kMachineLevel * std::abs(cur.phi)) break;

            double step = 1.0;
            PhiValue trial = phi_at(bp, u + step * dx, t);
            while (step > kMinStep && (!trial.ok || trial.phi > cur.phi + opts.ls_alpha * step * g.dot(dx))) {
                step *= opts.ls_beta;
                trial = phi_at(bp, u + step * dx, t);
            }
            if (!trial.ok || step <= kMinStep) break;
            u += step * dx;
            cur = trial;
            ++res.newton_steps;
        }
        if (m / t <= opts.tol * std::max(1.0, std::abs(cur.f0))) break;
        t *= opts.t_factor;
    }
    res.u = u;
    res.value = smoothed_value(*p.objective, u);
    res.multipliers = Vec::Zero(static_cast<Eigen::Index>(p.constraints.size()));
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
        res.multipliers(static_cast<Eigen::Index>(i)) = 1.0 / (t * -smoothed_value(*p.constraints[i], u));
    // Sensitivity of the optimal value to the box: large when the box is what stops the descent.
    double pressure = 0.0;
    for (std::size_t i = p.constraints.size(); i < bp.constraints.size(); ++i)
        pressure += box / (t * -smoothed_value(*bp.constraints[i], u));
    res.box_pressure = pressure;
    if (res.value < -opts.cap) {
        res.status = BarrierStatus::Unbounded;
        res.message = "objective below -cap";
    } else if (u.cwiseAbs().maxCoeff() > opts.cap && pressure > 1e-3 * (1.0 + std::abs(res.value))) {
        res.status = BarrierStatus::Unbounded;
        res.attained = false;
        res.message = "iterates exceed the cap while the objective decreases";
    } else if (std::isfinite(last_dec) && (last_dec / 2.0 <= 1e-6 || last_dec <= 1e3 * kRoundoff * std::abs(cur.phi))) {
        res.status = BarrierStatus::Optimal;
    } else {
        res.status = BarrierStatus::NumericalFailure;
        res.message = "Newton centering did not converge";
    }
    return res;
}

}  // namespace cvop
