#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cvop {

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Eigen::VectorXd u;
};

/// Raised when the simplex exceeds its pivot budget or loses numerical consistency.
class LpFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// minimize c'u  s.t.  A u >= b  (rows listed in `equality` hold with equality),
/// with u_j >= 0 when nonneg[j] is set and u_j free otherwise.
struct LinearProgram {
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    std::vector<bool> equality;  // empty: all rows are inequalities
    std::vector<bool> nonneg;    // empty: all variables free
};

/// Two-phase revised simplex with Bland's rule; the basis is refactored at every pivot.
LpResult solve_lp(const LinearProgram& lp, int max_pivots = 100000);

}  // namespace cvop
