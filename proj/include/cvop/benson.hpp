#pragma once

#include <string>
#include <vector>

#include "cvop/recession.hpp"

namespace cvop {

enum class SolveStatus { Done, Bounded, Infeasible, SlaterFailure, IterationLimit, DualRedirect, NumericalFailure };

std::string to_string(SolveStatus s);

/// Finite weak (eps, delta)-solution together with the approximations built on the way.
struct EpsDeltaSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    double epsilon = 0.0;
    double delta = 0.0;
    std::vector<Vec> xbar;
    std::vector<Vec> tbar;
    std::vector<Vec> y_out;
    std::vector<Vec> y_in;
    Polyhedron outer;        // outer approximation of the upper image (H-rep, irredundant)
    Polyhedron inner;        // conv Gamma(xbar) + cone y_in (V-rep)
    Polyhedron dual_region;  // final D_k of the dual algorithm (H-rep)
    std::vector<Halfspace> cuts;  // every cut in order (primal: y-space, dual: t-space)
    std::vector<std::size_t> cuts_per_round;
    int rounds = 0;
    int scalarizations = 0;
    double max_gap = 0.0;  // largest vertex gap in the last round
    std::string message;
    ConeApproximation approx;
};

struct BensonOptions {
    double epsilon = 0.01;
    RecessionOptions recession;
    int max_rounds = 200;
};

EpsDeltaSolution solve_primal(const ProblemSpec& spec, const BensonOptions& opts);
EpsDeltaSolution solve_dual(const ProblemSpec& spec, const BensonOptions& opts);

/// Dual algorithm started from an existing recession-cone approximation.
EpsDeltaSolution solve_dual(ScalarSolver& solver, const TMatrix& T, const ConeApproximation& approx,
                            const BensonOptions& opts);

/// Step 2 of the dual algorithm: extreme directions of (cone y_out)+ whose
/// weighted-sum problem is unbounded.
std::vector<Vec> unbounded_dual_directions(ScalarSolver& solver, const std::vector<Vec>& y_out);

/// Halfspaces of D_0 in t-space.
std::vector<Halfspace> initial_dual_halfspaces(const ProblemSpec& spec, const TMatrix& T, const std::vector<Vec>& y_out,
                                               const std::vector<Vec>& xbar);

/// Adds `h` unless a cut with the same normalized normal and no deeper offset
/// is already present. Returns true when added.
bool add_unique_cut(std::vector<Halfspace>& cuts, const Halfspace& h);

struct CertificationReport {
    bool ok = true;
    double worst = 0.0;      // largest l1 slack of a sample outside conv Gamma(xbar) + cone y_out - eps c
    int worst_index = -1;
    bool xbar_feasible = true;
    std::string message;
};

/// Checks that every sample y (points of the upper image) lies in
/// conv Gamma(xbar) + cone y_out - eps c, with l1 slack <= tol.
CertificationReport certify_solution(const ProblemSpec& spec, const EpsDeltaSolution& sol,
                                     const std::vector<Vec>& samples, double tol = 1e-6);

}  // namespace cvop
