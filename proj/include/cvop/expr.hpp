#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cvop {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Smoothing parameter for the euclidean-norm atom. Only derivatives (and the
/// solver-facing second-order model) use it; `evaluate` is exact.
inline constexpr double kNormSmoothing = 1e-8;

enum class Curvature { Affine, Convex, Unknown };

std::string to_string(Curvature c);

/// Thrown when an expression is evaluated outside the domain of one of its
/// atoms (currently: a negative argument to a guarded power).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Sparse affine form  sum_k coeff_k * x_k + offset  (variable indices 1-based).
struct AffineForm {
    std::vector<std::pair<int, double>> terms;  // sorted by index, no zero coefficients
    double offset = 0.0;

    double evaluate(const Vec& x) const;
    bool operator==(const AffineForm&) const = default;
};

/// Immutable expression tree node. Build with the static factories; every
/// factory computes the curvature tag bottom-up.
class Expr {
public:
    enum class Kind { Constant, Variable, Affine, Sum, Difference, Scale, Square, Power, Exp, Norm2 };

    static ExprPtr constant(double value);
    static ExprPtr variable(int index);
    static ExprPtr affine(AffineForm form);
    static ExprPtr sum(std::vector<ExprPtr> terms);
    static ExprPtr difference(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr scale(double factor, ExprPtr child);
    static ExprPtr square(ExprPtr child);
    static ExprPtr power(ExprPtr child, double exponent);
    static ExprPtr exp(ExprPtr child);
    static ExprPtr norm2(std::vector<ExprPtr> args);

    Kind kind() const { return kind_; }
    Curvature curvature() const { return curvature_; }
    /// Largest variable index referenced (0 if none).
    int max_variable() const { return max_var_; }
    bool is_constant() const { return max_var_ == 0; }

    double number() const { return number_; }  // Constant value, Scale factor, Power exponent
    int index() const { return index_; }         // Variable
    const AffineForm& form() const { return form_; }
    const std::vector<ExprPtr>& children() const { return children_; }

private:
    Expr() = default;
    static ExprPtr finish(std::shared_ptr<Expr> e);

    Kind kind_ = Kind::Constant;
    Curvature curvature_ = Curvature::Affine;
    int max_var_ = 0;
    double number_ = 0.0;
    int index_ = 0;
    AffineForm form_;
    std::vector<ExprPtr> children_;
};

/// Value, gradient and Hessian of an expression at a point.
struct SecondOrder {
    double value = 0.0;
    Vec gradient;
    Mat hessian;
};

/// Exact evaluation. Throws DomainError for a negative guarded-power argument.
double evaluate(const Expr& e, const Vec& x);

/// Value of the smoothed expression (norm atoms as sqrt(sum a_i^2 + mu)).
double smoothed_value(const Expr& e, const Vec& x, double mu = kNormSmoothing);

/// Gradient; the euclidean-norm atom is differentiated in its smoothed form
/// sqrt(sum a_i^2 + mu).
Vec gradient(const Expr& e, const Vec& x, double mu = kNormSmoothing);

/// Second-order model of the smoothed expression (norm atoms use
/// sqrt(sum a_i^2 + mu) for the value as well, so value/gradient/Hessian are
/// consistent for Newton-type solvers).
SecondOrder second_order(const Expr& e, const Vec& x, double mu = kNormSmoothing);

/// Affine form of `e` if its curvature is affine.
std::optional<AffineForm> as_affine(const Expr& e);

/// Folds every affine subtree into a single Affine node.
ExprPtr canonicalize(const ExprPtr& e);

/// Text form accepted by the problem-file expression grammar. Numbers are
/// printed with round-trip precision.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Weighted sum  sum_i weights_i * exprs_i  (zero weights skipped).
ExprPtr weighted_sum(const std::vector<ExprPtr>& exprs, const Vec& weights);

/// Parse a single expression. Throws ParseError.
ExprPtr parse_expression(const std::string& text);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position, std::string token)
        : std::runtime_error(what), position_(position), token_(std::move(token)) {}
    std::size_t position() const { return position_; }
    const std::string& token() const { return token_; }

private:
    std::size_t position_;
    std::string token_;
};

}  // namespace cvop
