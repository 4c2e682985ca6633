#pragma once

#include <string>
#include <vector>

#include "cvop/polyhedral.hpp"
#include "cvop/problem.hpp"
#include "cvop/scalarization.hpp"

namespace cvop {

/// Nonsingular q x q matrix whose last column is c, with its inverse.
struct TMatrix {
    Mat T;
    Mat Tinv;

    /// [e_1 .. e_{q-1}, c]; the omitted standard vector is shifted cyclically
    /// until the matrix is nonsingular.
    static TMatrix standard(const Vec& c);

    /// w(t) = T^{-T} (t_1, ..., t_{q-1}, 1)
    Vec w_of_t(const Vec& t) const;
    /// T'(w / c'w)
    Vec t_of_w(const Vec& w) const;
};

enum class RecessionStatus { Done, Bounded, Infeasible, SlaterFailure, IterationLimit };

std::string to_string(RecessionStatus s);

enum class LoopAction { Accept, InnerUpdate, Cut };

std::string to_string(LoopAction a);

/// One pass of the refinement loop.
struct IterationRecord {
    int iter = 0;
    Vec d;
    Vec r_tilde;
    double dist = 0.0;
    LoopAction action = LoopAction::Accept;
    Vec added;                  // new inner direction (InnerUpdate) or the probed direction (Cut)
    std::vector<Vec> new_y_out; // Y_Out after a cut
};

/// Sets after an iteration, for plotting.
struct Snapshot {
    int iter = 0;
    std::vector<Vec> y_in;
    std::vector<Vec> y_out;
    std::vector<Vec> c_hat;
};

struct ConeApproximation {
    RecessionStatus status = RecessionStatus::Infeasible;
    int q = 0;
    std::vector<Halfspace> cuts;  // H-representation of P0 (every cut, in order)
    std::vector<Vec> y_in;
    std::vector<Vec> y_out;
    std::vector<Vec> c_hat;
    std::vector<Vec> xbar;
    std::vector<Vec> tbar;
    Vec x0;
    Vec v;
    double phase1_value = 0.0;
    std::vector<IterationRecord> log;
    std::vector<Snapshot> snapshots;  // index 0: state after initialization
    int iterations = 0;
    int scalarizations = 0;

    Polyhedron outer() const { return Polyhedron::from_hrep(q, cuts); }
};

struct RecessionOptions {
    double delta = 0.1;
    int max_iter = 500;
    SolverOptions solver;
};

ConeApproximation approximate_recession_cone(ScalarSolver& solver, const TMatrix& T, const RecessionOptions& opts);
ConeApproximation approximate_recession_cone(const ProblemSpec& spec, const TMatrix& T, const RecessionOptions& opts);

struct DeltaReport {
    bool ok = true;
    double distance = 0.0;     // l1 Hausdorff distance of the cones within B_1
    double angle_bound = 0.0;  // arccos(1 - q delta^2 / 2)
    bool inner_in_outer = true;
    int offending = -1;        // index into y_out violating the per-vertex condition
    std::string message;
};

DeltaReport certify_delta(const std::vector<Vec>& y_in, const std::vector<Vec>& y_out, double delta);

}  // namespace cvop
