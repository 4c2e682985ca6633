#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cvop/expr.hpp"
#include "cvop/polyhedral.hpp"
#include "cvop/problem.hpp"
#include "cvop/scalarization.hpp"

namespace cvop::testing {

inline std::string fixture(const std::string& name) { return std::string(CVOP_PROBLEM_DIR) + "/" + name; }

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    bool coin() { return integer(0, 1) == 1; }
    Vec uniform_vec(int n, double lo, double hi) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
        return v;
    }
    Vec gaussian(int n) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = normal();
        return v;
    }
    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

inline double sup_dist(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Largest over `expected` of the distance to the nearest element of `actual`, and vice versa.
inline double set_distance(const std::vector<Vec>& actual, const std::vector<Vec>& expected) {
    auto one_way = [](const std::vector<Vec>& from, const std::vector<Vec>& to) {
        double worst = 0.0;
        for (const auto& a : from) {
            double best = INFINITY;
            for (const auto& b : to) best = std::min(best, sup_dist(a, b));
            worst = std::max(worst, best);
        }
        return worst;
    };
    if (actual.empty() || expected.empty()) return actual.empty() && expected.empty() ? 0.0 : INFINITY;
    return std::max(one_way(actual, expected), one_way(expected, actual));
}

inline bool feasible(const ProblemSpec& spec, const Vec& x, double tol = 0.0) {
    try {
        for (const auto& g : spec.constraints)
            if (evaluate(*g, x) > tol) return false;
    } catch (const DomainError&) {
        return false;
    }
    return true;
}

/// Feasible points by rejection sampling from Gaussian clouds of several scales around x0.
inline std::vector<Vec> sample_feasible(const ProblemSpec& spec, const Vec& x0, int count, Rng& rng) {
    std::vector<Vec> out;
    const double scales[] = {0.1, 1.0, 10.0};
    for (int tries = 0; static_cast<int>(out.size()) < count && tries < 200 * count; ++tries) {
        const Vec x = x0 + scales[tries % 3] * rng.gaussian(spec.n);
        if (feasible(spec, x)) out.push_back(x);
    }
    return out;
}

/// Points of the parabola's upper image on its boundary: (s, (s-1)^2) for s in [-3, 1]
/// and (s, 0) for s in [1, 5], `count` in total.
inline std::vector<Vec> parabola_boundary(int count) {
    std::vector<Vec> pts;
    const int half = count / 2;
    for (int i = 0; i < half; ++i) {
        const double s = -3.0 + 4.0 * i / (half - 1);
        pts.push_back((Vec(2) << s, (s - 1.0) * (s - 1.0)).finished());
    }
    for (int i = 0; i < count - half; ++i) {
        const double s = 1.0 + 4.0 * i / (count - half - 1);
        pts.push_back((Vec(2) << s, 0.0).finished());
    }
    return pts;
}

/// min w'Gamma(x) over the feasible set cut by the box |x_k| <= 100 (1 + max(|x0|, |xstar|)).
/// Equals the infimum over the whole feasible set whenever xstar is a minimizer.
inline ScalarOutcome boxed_weighted_sum(const ProblemSpec& spec, const Vec& w, const Vec& x0, const Vec& xstar,
                                        const SolverOptions& opts = {}) {
    const double r = 100.0 * (1.0 + std::max(x0.cwiseAbs().maxCoeff(), xstar.cwiseAbs().maxCoeff()));
    ProblemSpec boxed = spec;
    for (int k = 1; k <= spec.n; ++k) {
        boxed.constraints.push_back(Expr::affine(AffineForm{{{k, 1.0}}, -r}));
        boxed.constraints.push_back(Expr::affine(AffineForm{{{k, -1.0}}, -r}));
    }
    return solve_weighted_sum(boxed, w, x0, opts);
}

inline Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

}  // namespace cvop::testing
