#include "cvop/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvop {

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-7;
constexpr double kTinyPivotTol = 1e-12;
constexpr double kRatioTol = 1e-9;

// min c'z  s.t.  A z = b (b >= 0), z >= 0, solved by a revised simplex that
// refactors the basis every pivot. Columns with allowed[j] false never enter.
struct Revised {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    std::vector<int> basis;
    int pivots = 0;
    int max_pivots = 0;

    Eigen::PartialPivLU<Eigen::MatrixXd> factor() const {
        Eigen::MatrixXd B(A.rows(), static_cast<Eigen::Index>(basis.size()));
        for (std::size_t k = 0; k < basis.size(); ++k) B.col(static_cast<Eigen::Index>(k)) = A.col(basis[k]);
        return Eigen::PartialPivLU<Eigen::MatrixXd>(B);
    }

    Eigen::VectorXd primal() const { return factor().solve(b).cwiseMax(0.0); }

    // Returns false on unboundedness.
    bool run(const Eigen::VectorXd& c, const std::vector<bool>& allowed) {
        const auto m = A.rows();
        const auto n = A.cols();
        for (;;) {
            const auto lu = factor();
            const Eigen::VectorXd xB = lu.solve(b).cwiseMax(0.0);
            Eigen::VectorXd cB(m);
            for (Eigen::Index i = 0; i < m; ++i) cB(i) = c(basis[static_cast<std::size_t>(i)]);
            const Eigen::VectorXd y = lu.transpose().solve(cB);
            std::vector<bool> in_basis(static_cast<std::size_t>(n), false);
            for (int j : basis) in_basis[static_cast<std::size_t>(j)] = true;
            int enter = -1;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (!allowed[static_cast<std::size_t>(j)] || in_basis[static_cast<std::size_t>(j)]) continue;
                const double r = c(j) - A.col(j).dot(y);
                if (r < -kCostTol * (1.0 + std::abs(c(j)))) {
                    enter = static_cast<int>(j);
                    break;
                }
            }
            if (enter < 0) return true;
            const Eigen::VectorXd dB = lu.solve(A.col(enter));
            // Small pivots are avoided but still block the ray before unboundedness is declared.
            const double scale = std::max(1.0, dB.cwiseAbs().maxCoeff());
            double piv = kPivotTol * scale;
            if ((dB.array() <= piv).all()) piv = kTinyPivotTol * scale;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < m; ++i)
                if (dB(i) > piv) best = std::min(best, xB(i) / dB(i));
            // Among (near) ties take the largest pivot element, then the lowest basic index.
            int leave = -1;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (dB(i) <= piv || xB(i) / dB(i) > best + kRatioTol) continue;
                const auto li = static_cast<std::size_t>(leave);
                if (leave < 0 || dB(i) > dB(leave) * (1.0 + 1e-9) ||
                    (dB(i) >= dB(leave) * (1.0 - 1e-9) && basis[static_cast<std::size_t>(i)] < basis[li]))
                    leave = static_cast<int>(i);
            }
            if (leave < 0) return false;
            basis[static_cast<std::size_t>(leave)] = enter;
            if (++pivots > max_pivots) throw LpFailure("simplex pivot limit exceeded");
        }
    }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, int max_pivots) {
    const int m = static_cast<int>(lp.A.rows());
    const int n = static_cast<int>(lp.A.cols());
    auto is_eq = [&](int i) { return !lp.equality.empty() && lp.equality[static_cast<std::size_t>(i)]; };
    auto is_nonneg = [&](int j) { return !lp.nonneg.empty() && lp.nonneg[static_cast<std::size_t>(j)]; };

    // Column layout: structural (free variables split), surplus per inequality, artificial per row.
    std::vector<int> pos_col(n), neg_col(n, -1);
    int ncol = 0;
    for (int j = 0; j < n; ++j) {
        pos_col[j] = ncol++;
        if (!is_nonneg(j)) neg_col[j] = ncol++;
    }
    std::vector<int> surplus_col(m, -1);
    for (int i = 0; i < m; ++i)
        if (!is_eq(i)) surplus_col[i] = ncol++;
    const int art0 = ncol;
    ncol += m;

    Revised rs;
    rs.max_pivots = max_pivots;
    rs.A = Eigen::MatrixXd::Zero(m, ncol);
    rs.b = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        const double sign = lp.b(i) < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) {
            rs.A(i, pos_col[j]) = sign * lp.A(i, j);
            if (neg_col[j] >= 0) rs.A(i, neg_col[j]) = -sign * lp.A(i, j);
        }
        if (surplus_col[i] >= 0) rs.A(i, surplus_col[i]) = -sign;
        rs.A(i, art0 + i) = 1.0;
        rs.b(i) = sign * lp.b(i);
        rs.basis.push_back(art0 + i);
    }

    // Phase 1: minimize the sum of artificials.
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(ncol);
    c1.tail(m).setOnes();
    std::vector<bool> allowed(static_cast<std::size_t>(ncol), true);
    if (!rs.run(c1, allowed)) throw LpFailure("phase 1 reported an unbounded ray");
    LpResult res;
    res.u = Eigen::VectorXd::Zero(n);
    const double bscale = 1.0 + (m > 0 ? lp.b.cwiseAbs().maxCoeff() : 0.0);
    {
        const Eigen::VectorXd xB = rs.primal();
        double infeas = 0.0;
        for (std::size_t k = 0; k < rs.basis.size(); ++k)
            if (rs.basis[k] >= art0) infeas += xB(static_cast<Eigen::Index>(k));
        if (infeas > 1e-8 * bscale) {
            res.status = LpStatus::Infeasible;
            return res;
        }
    }
    // Drive artificials out of the basis; rows where that is impossible are redundant.
    for (;;) {
        int row = -1;
        for (std::size_t k = 0; k < rs.basis.size(); ++k)
            if (rs.basis[k] >= art0) row = static_cast<int>(k);
        if (row < 0) break;
        const auto lu = rs.factor();
        Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rs.basis.size()));
        e(row) = 1.0;
        const Eigen::VectorXd rho = lu.transpose().solve(e);  // row `row` of B^-1
        std::vector<bool> in_basis(static_cast<std::size_t>(ncol), false);
        for (int j : rs.basis) in_basis[static_cast<std::size_t>(j)] = true;
        int col = -1;
        double best = 1e-7;
        for (int j = 0; j < art0; ++j) {
            if (in_basis[static_cast<std::size_t>(j)]) continue;
            const double v = std::abs(rho.dot(rs.A.col(j)));
            if (v > best) {
                best = v;
                col = j;
            }
        }
        if (col >= 0) {
            rs.basis[static_cast<std::size_t>(row)] = col;
            continue;
        }
        // Redundant: remove the constraint whose artificial is basic in this row.
        const int drop = rs.basis[static_cast<std::size_t>(row)] - art0;
        Eigen::MatrixXd A2(rs.A.rows() - 1, rs.A.cols());
        Eigen::VectorXd b2(rs.b.size() - 1);
        for (Eigen::Index i = 0, k = 0; i < rs.A.rows(); ++i) {
            if (i == drop) continue;
            A2.row(k) = rs.A.row(i);
            b2(k++) = rs.b(i);
        }
        rs.A = std::move(A2);
        rs.b = std::move(b2);
        rs.basis.erase(rs.basis.begin() + row);
        allowed[static_cast<std::size_t>(art0 + drop)] = false;
    }

    // Phase 2.
    Eigen::VectorXd c2 = Eigen::VectorXd::Zero(ncol);
    for (int j = 0; j < n; ++j) {
        c2(pos_col[j]) = lp.c(j);
        if (neg_col[j] >= 0) c2(neg_col[j]) = -lp.c(j);
    }
    for (int j = art0; j < ncol; ++j) allowed[static_cast<std::size_t>(j)] = false;
    if (!rs.run(c2, allowed)) {
        res.status = LpStatus::Unbounded;
        return res;
    }
    const Eigen::VectorXd xB = rs.primal();
    Eigen::VectorXd full = Eigen::VectorXd::Zero(ncol);
    for (std::size_t k = 0; k < rs.basis.size(); ++k) full(rs.basis[k]) = xB(static_cast<Eigen::Index>(k));
    for (int j = 0; j < n; ++j) {
        res.u(j) = full(pos_col[j]);
        if (neg_col[j] >= 0) res.u(j) -= full(neg_col[j]);
    }
    res.status = LpStatus::Optimal;
    res.value = lp.c.dot(res.u);
    return res;
}

}  // namespace cvop
