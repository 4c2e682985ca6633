#pragma once

#include <string>

#include "cvop/barrier.hpp"
#include "cvop/problem.hpp"

namespace cvop {

enum class ScalarStatus { Optimal, Unbounded, Infeasible, NumericalFailure };

std::string to_string(ScalarStatus s);

struct ScalarOutcome {
    ScalarStatus status = ScalarStatus::NumericalFailure;
    Vec x;             // optimal point
    double value = 0;  // objective value (P1: w'Gamma(x); P2: z)
    double z = 0;      // P2 only
    Vec w;             // P2 only: multiplier in C+, scaled so that w'd = -1
    bool attained = true;
    std::string message;
};

enum class FeasibilityStatus { StrictlyFeasible, Infeasible, SlaterFailure };

struct FeasibilityResult {
    FeasibilityStatus status = FeasibilityStatus::Infeasible;
    Vec x0;
    double s = 0;  // phase-I value
};

/// Phase I: minimize s (plus a small proximal term) subject to g_i(x) <= s and
/// s >= -1. A `start` point in the problem is used directly when strictly feasible.
FeasibilityResult check_feasibility(const ProblemSpec& spec, const SolverOptions& opts);

/// P1(w): minimize w'Gamma(x) over the feasible set, started from x0.
ScalarOutcome solve_weighted_sum(const ProblemSpec& spec, const Vec& w, const Vec& x0, const SolverOptions& opts);

/// P2(v,d): maximize z subject to x feasible and z_j'(Gamma(x) - v - z d) <= 0
/// for every dual generator z_j.
ScalarOutcome solve_pascoletti_serafini(const ProblemSpec& spec, const Vec& v, const Vec& d, const Vec& x0,
                                        const SolverOptions& opts);

/// True iff P1(w) is unbounded.
bool detect_unbounded_direction(const ProblemSpec& spec, const Vec& w, const Vec& x0, const SolverOptions& opts);

/// Raised when a scalar problem cannot be solved (distinct from unboundedness).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Holds the problem, options and the phase-I point; counts scalar solves.
class ScalarSolver {
public:
    ScalarSolver(const ProblemSpec& spec, SolverOptions opts);

    const FeasibilityResult& feasibility();
    const Vec& x0();
    ScalarOutcome weighted_sum(const Vec& w);
    ScalarOutcome pascoletti_serafini(const Vec& v, const Vec& d);
    const ProblemSpec& spec() const { return spec_; }
    const SolverOptions& options() const { return opts_; }
    int solves() const { return solves_; }

private:
    const ProblemSpec& spec_;
    SolverOptions opts_;
    std::optional<FeasibilityResult> feas_;
    int solves_ = 0;
};

}  // namespace cvop
