#pragma once

#include <string>
#include <vector>

#include "cvop/expr.hpp"

namespace cvop {

struct SolverOptions {
    double tol = 1e-6;        // duality-gap target m/t
    double cap = 1e8;         // unboundedness cap M
    double t0 = 1e-6;
    double t_factor = 10.0;
    int max_outer = 16;
    int max_newton = 100;
    double ls_alpha = 0.25;
    double ls_beta = 0.5;
    double lambda = 0.5;      // convex-combination weight used by the recession loop
    double phase1_reg = 1e-6; // proximal weight in the feasibility problem
};

/// minimize objective(u)  s.t.  constraints_i(u) <= 0, u in R^dim.
struct BarrierProblem {
    int dim = 0;
    ExprPtr objective;
    std::vector<ExprPtr> constraints;
};

enum class BarrierStatus { Optimal, Unbounded, NumericalFailure };

struct BarrierResult {
    BarrierStatus status = BarrierStatus::NumericalFailure;
    Vec u;
    double value = 0.0;
    Vec multipliers;       // lambda_i = 1/(t * slack_i) at the final stage
    bool attained = true;  // false when iterates hit the cap without further descent
    int newton_steps = 0;
    double box_pressure = 0.0;  // sum of box multipliers times the box half-width
    std::string message;
};

/// Log-barrier method with damped Newton centering inside the box
/// |u_i| <= 10 cap. `u0` must be strictly feasible for every constraint.
BarrierResult barrier_minimize(const BarrierProblem& p, const Vec& u0, const SolverOptions& opts);

/// Affine expression  sum coeffs_k u_k + offset  over 1-based indices.
ExprPtr affine_expr(const std::vector<std::pair<int, double>>& terms, double offset = 0.0);

}  // namespace cvop
