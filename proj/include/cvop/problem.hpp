#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvop/expr.hpp"
#include "cvop/polyhedral.hpp"

namespace cvop {

/// Polyhedral ordering cone C with its normalized data:
/// R  - extreme directions of C, unit l1 length;
/// Rstar - extreme directions of C+, scaled so that c'z = 1;
/// c  - fixed interior direction (normalized sum of R, unit l1 length).
struct OrderingCone {
    PolyCone cone;
    std::vector<Vec> R;
    std::vector<Vec> Rstar;
    Vec c;
};

class ProblemError : public std::runtime_error {
public:
    enum class Kind { Syntax, UnknownIdentifier, Validation, Convexity, Cone };
    ProblemError(Kind kind, const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), kind_(kind), line_(line) {}
    Kind kind() const { return kind_; }
    int line() const { return line_; }

private:
    Kind kind_;
    int line_;
};

/// Builds C from generators (or, when `gens` is empty, from dual generators)
/// and checks that it is nontrivial, pointed and solid.
OrderingCone make_ordering_cone(int q, const std::vector<Vec>& gens, const std::vector<Vec>& duals);

struct ProblemSpec {
    std::string name;
    int n = 0;
    int q = 0;
    bool free = false;
    std::vector<ExprPtr> objectives;
    std::vector<ExprPtr> constraints;
    std::vector<Vec> cone_generators;  // as written in the file
    std::vector<Vec> cone_duals;       // as written in the file
    std::optional<Vec> start;          // optional strictly feasible starting point
    OrderingCone cone;

    Vec objective_values(const Vec& x) const;
};

ProblemSpec parse_problem(const std::string& text);
ProblemSpec load_problem(const std::string& path);
std::string serialize(const ProblemSpec& spec);
bool same_problem(const ProblemSpec& a, const ProblemSpec& b);

struct ConvexityReport {
    bool ok = true;
    int generator = -1;  // index into cone.Rstar
    int component = -1;  // objective index (0-based) carrying the offending weight
    std::string message;
};

/// Sufficient test for C-convexity: every weighted sum z'Gamma with z a dual
/// generator must be tagged convex.
ConvexityReport verify_C_convexity(const ProblemSpec& spec);

/// Affine forms of constraints (empty optional for nonlinear ones).
std::vector<std::optional<AffineForm>> affine_constraints(const ProblemSpec& spec);

}  // namespace cvop
