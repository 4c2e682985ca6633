#include "cvop/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace cvop {

std::string to_string(Curvature c) {
    switch (c) {
        case Curvature::Affine: return "affine";
        case Curvature::Convex: return "convex";
        case Curvature::Unknown: return "unknown";
    }
    return "unknown";
}

double AffineForm::evaluate(const Vec& x) const {
    double v = offset;
    for (const auto& [k, a] : terms) v += a * x(k - 1);
    return v;
}

namespace {

bool affine_or_convex(Curvature c) { return c != Curvature::Unknown; }

AffineForm scaled(const AffineForm& f, double s) {
    AffineForm out;
    out.offset = s * f.offset;
    for (const auto& [k, a] : f.terms)
        if (s * a != 0.0) out.terms.emplace_back(k, s * a);
    return out;
}

AffineForm added(const AffineForm& f, const AffineForm& g, double sg) {
    std::map<int, double> acc;
    for (const auto& [k, a] : f.terms) acc[k] += a;
    for (const auto& [k, a] : g.terms) acc[k] += sg * a;
    AffineForm out;
    out.offset = f.offset + sg * g.offset;
    for (const auto& [k, a] : acc)
        if (a != 0.0) out.terms.emplace_back(k, a);
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ExprPtr Expr::finish(std::shared_ptr<Expr> e) {
    int mv = 0;
    for (const auto& c : e->children_) mv = std::max(mv, c->max_var_);
    if (e->kind_ == Kind::Variable) mv = e->index_;
    if (e->kind_ == Kind::Affine)
        for (const auto& t : e->form_.terms) mv = std::max(mv, t.first);
    e->max_var_ = mv;
    return e;
}

ExprPtr Expr::constant(double value) {
    auto e = std::shared_ptr<Expr>(new Expr);
    e->kind_ = Kind::Constant;
    e->number_ = value;
    e->curvature_ = Curvature::Affine;
    return finish(e);
}

ExprPtr Expr::variable(int index) {
    if (index < 1) throw std::invalid_argument("variable index must be >= 1");
    auto e = std::shared_ptr<Expr>(new Expr);
    e->kind_ = Kind::Variable;
    e->index_ = index;
    e->curvature_ = Curvature::Affine;
    return finish(e);
}

ExprPtr Expr::affine(AffineForm form) {
    std::sort(form.terms.begin(), form.terms.end());
    auto e = std::shared_ptr<Expr>(new Expr);
    e->kind_ = Kind::Affine;
    e->form_ = std::move(form);
    e->curvature_ = Curvature::Affine;
    return finish(e);
}

ExprPtr Expr::sum(std::vector<ExprPtr> terms) {
    if (terms.empty()) return constant(0.0);
    auto e = std::shared_ptr<Expr>(new Expr);
    e->kind_ = Kind::Sum;
    bool all_affine = true, all_ac = true;
    for (const auto& t : terms) {
        all_affine = all_affine && t->curvature() == Curvature::Affine;
        all_ac = all_ac && affine_or_convex(t->curvature());
    }
    e->curvature_ = all_affine ? Curvature::Affine : all_ac ? Curvature::Convex : Curvature::Unknown;
    e->children_ = std::move(terms);
    return finish(e);
}

ExprPtr Expr::difference(ExprPtr lhs, ExprPtr rhs) {
    auto e = std::shared_ptr<Expr>(new Expr);
    e->kind_ = Kind::Difference;
    e->curvature_ = rhs->curvature() == Curvature::Affine ? lhs->curvature() : Curvature::Unknown;
    e->children_ = {std::move(lhs), std::move(rhs)};
    return finish(e);
}

ExprPtr Expr::scale(double factor, ExprPtr child) {
    auto e = std::shared_ptr<Expr>(new Expr);
    e->kind_ = Kind::Scale;
    e->number_ = factor;
    if (factor == 0.0 || child->curvature() == Curvature::Affine)
        e->curvature_ = Curvature::Affine;
    else if (factor > 0.0)
        e->curvature_ = child->curvature();
    else
        e->curvature_ = Curvature::Unknown;
    e->children_ = {std::move(child)};
    return finish(e);
}

ExprPtr Expr::square(ExprPtr child) {
    auto e = std::shared_ptr<Expr>(new Expr);
    e->kind_ = Kind::Square;
    e->curvature_ = child->curvature() == Curvature::Affine ? Curvature::Convex : Curvature::Unknown;
    if (child->is_constant()) e->curvature_ = Curvature::Affine;
    e->children_ = {std::move(child)};
    return finish(e);
}

ExprPtr Expr::power(ExprPtr child, double exponent) {
    auto e = std::shared_ptr<Expr>(new Expr);
    e->kind_ = Kind::Power;
    e->number_ = exponent;
    e->curvature_ = (child->curvature() == Curvature::Affine && exponent >= 1.0) ? Curvature::Convex
                                                                                  : Curvature::Unknown;
    if (child->is_constant() || exponent == 0.0) e->curvature_ = Curvature::Affine;
    e->children_ = {std::move(child)};
    return finish(e);
}

ExprPtr Expr::exp(ExprPtr child) {
    auto e = std::shared_ptr<Expr>(new Expr);
    e->kind_ = Kind::Exp;
    e->curvature_ = affine_or_convex(child->curvature()) ? Curvature::Convex : Curvature::Unknown;
    if (child->is_constant()) e->curvature_ = Curvature::Affine;
    e->children_ = {std::move(child)};
    return finish(e);
}

ExprPtr Expr::norm2(std::vector<ExprPtr> args) {
    if (args.empty()) throw std::invalid_argument("norm2 needs at least one argument");
    auto e = std::shared_ptr<Expr>(new Expr);
    e->kind_ = Kind::Norm2;
    bool all_affine = true, all_const = true;
    for (const auto& a : args) {
        all_affine = all_affine && a->curvature() == Curvature::Affine;
        all_const = all_const && a->is_constant();
    }
    e->curvature_ = all_const ? Curvature::Affine : all_affine ? Curvature::Convex : Curvature::Unknown;
    e->children_ = std::move(args);
    return finish(e);
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Expr& e, const Vec& x) {
    using K = Expr::Kind;
    switch (e.kind()) {
        case K::Constant: return e.number();
        case K::Variable: return x(e.index() - 1);
        case K::Affine: return e.form().evaluate(x);
        case K::Sum: {
            double s = 0.0;
            for (const auto& c : e.children()) s += evaluate(*c, x);
            return s;
        }
        case K::Difference: return evaluate(*e.children()[0], x) - evaluate(*e.children()[1], x);
        case K::Scale: return e.number() * evaluate(*e.children()[0], x);
        case K::Square: {
            double a = evaluate(*e.children()[0], x);
            return a * a;
        }
        case K::Power: {
            double a = evaluate(*e.children()[0], x);
            if (a < 0.0) throw DomainError("pow argument is negative");
            return std::pow(a, e.number());
        }
        case K::Exp: return std::exp(evaluate(*e.children()[0], x));
        case K::Norm2: {
            double s = 0.0;
            for (const auto& c : e.children()) {
                double a = evaluate(*c, x);
                s += a * a;
            }
            return std::sqrt(s);
        }
    }
    return 0.0;
}

namespace {

// Forward-mode second order evaluation. When `hess` is false the Hessian is
// left empty.
SecondOrder eval2(const Expr& e, const Vec& x, double mu, bool hess) {
    using K = Expr::Kind;
    const Eigen::Index n = x.size();
    SecondOrder r;
    r.gradient = Vec::Zero(n);
    if (hess) r.hessian = Mat::Zero(n, n);
    switch (e.kind()) {
        case K::Constant: r.value = e.number(); break;
        case K::Variable:
            r.value = x(e.index() - 1);
            r.gradient(e.index() - 1) = 1.0;
            break;
        case K::Affine:
            r.value = e.form().evaluate(x);
            for (const auto& [k, a] : e.form().terms) r.gradient(k - 1) = a;
            break;
        case K::Sum:
            for (const auto& c : e.children()) {
                auto s = eval2(*c, x, mu, hess);
                r.value += s.value;
                r.gradient += s.gradient;
                if (hess) r.hessian += s.hessian;
            }
            break;
        case K::Difference: {
            auto a = eval2(*e.children()[0], x, mu, hess);
            auto b = eval2(*e.children()[1], x, mu, hess);
            r.value = a.value - b.value;
            r.gradient = a.gradient - b.gradient;
            if (hess) r.hessian = a.hessian - b.hessian;
            break;
        }
        case K::Scale: {
            auto a = eval2(*e.children()[0], x, mu, hess);
            r.value = e.number() * a.value;
            r.gradient = e.number() * a.gradient;
            if (hess) r.hessian = e.number() * a.hessian;
            break;
        }
        case K::Square: {
            auto a = eval2(*e.children()[0], x, mu, hess);
            r.value = a.value * a.value;
            r.gradient = 2.0 * a.value * a.gradient;
            if (hess) r.hessian = 2.0 * (a.gradient * a.gradient.transpose() + a.value * a.hessian);
            break;
        }
        case K::Power: {
            auto a = eval2(*e.children()[0], x, mu, hess);
            if (a.value < 0.0) throw DomainError("pow argument is negative");
            const double p = e.number();
            r.value = std::pow(a.value, p);
            const double d1 = p * std::pow(a.value, p - 1.0);
            r.gradient = d1 * a.gradient;
            if (hess) {
                const double d2 = p * (p - 1.0) * std::pow(a.value, p - 2.0);
                r.hessian = d2 * a.gradient * a.gradient.transpose() + d1 * a.hessian;
            }
            break;
        }
        case K::Exp: {
            auto a = eval2(*e.children()[0], x, mu, hess);
            r.value = std::exp(a.value);
            r.gradient = r.value * a.gradient;
            if (hess) r.hessian = r.value * (a.gradient * a.gradient.transpose() + a.hessian);
            break;
        }
        case K::Norm2: {
            double s = mu;
            Vec g = Vec::Zero(n);
            Mat h;
            if (hess) h = Mat::Zero(n, n);
            for (const auto& c : e.children()) {
                auto a = eval2(*c, x, mu, hess);
                s += a.value * a.value;
                g += a.value * a.gradient;
                if (hess) h += a.gradient * a.gradient.transpose() + a.value * a.hessian;
            }
            const double nv = std::sqrt(s);
            r.value = nv;
            r.gradient = g / nv;
            if (hess) r.hessian = h / nv - (g * g.transpose()) / (nv * nv * nv);
            break;
        }
    }
    return r;
}

}  // namespace

double smoothed_value(const Expr& e, const Vec& x, double mu) { return eval2(e, x, mu, false).value; }

Vec gradient(const Expr& e, const Vec& x, double mu) { return eval2(e, x, mu, false).gradient; }

SecondOrder second_order(const Expr& e, const Vec& x, double mu) { return eval2(e, x, mu, true); }

// ---------------------------------------------------------------------------
// Affine folding

std::optional<AffineForm> as_affine(const Expr& e) {
    using K = Expr::Kind;
    if (e.curvature() != Curvature::Affine) return std::nullopt;
    if (e.is_constant() && e.kind() != K::Affine) {
        AffineForm f;
        f.offset = evaluate(e, Vec());
        return f;
    }
    switch (e.kind()) {
        case K::Constant: {
            AffineForm f;
            f.offset = e.number();
            return f;
        }
        case K::Variable: {
            AffineForm f;
            f.terms.emplace_back(e.index(), 1.0);
            return f;
        }
        case K::Affine: return e.form();
        case K::Sum: {
            AffineForm f;
            for (const auto& c : e.children()) f = added(f, *as_affine(*c), 1.0);
            return f;
        }
        case K::Difference: return added(*as_affine(*e.children()[0]), *as_affine(*e.children()[1]), -1.0);
        case K::Scale: {
            if (e.number() == 0.0) return AffineForm{};
            return scaled(*as_affine(*e.children()[0]), e.number());
        }
        default: return std::nullopt;
    }
}

ExprPtr canonicalize(const ExprPtr& e) {
    using K = Expr::Kind;
    if (e->curvature() == Curvature::Affine) {
        if (e->kind() == K::Affine) return e;
        return Expr::affine(*as_affine(*e));
    }
    std::vector<ExprPtr> kids;
    for (const auto& c : e->children()) kids.push_back(canonicalize(c));
    switch (e->kind()) {
        case K::Sum: return Expr::sum(std::move(kids));
        case K::Difference: return Expr::difference(kids[0], kids[1]);
        case K::Scale: return Expr::scale(e->number(), kids[0]);
        case K::Square: return Expr::square(kids[0]);
        case K::Power: return Expr::power(kids[0], e->number());
        case K::Exp: return Expr::exp(kids[0]);
        case K::Norm2: return Expr::norm2(std::move(kids));
        default: return e;
    }
}

ExprPtr weighted_sum(const std::vector<ExprPtr>& exprs, const Vec& weights) {
    std::vector<ExprPtr> terms;
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        const double w = weights(static_cast<Eigen::Index>(i));
        if (w == 0.0) continue;
        terms.push_back(w == 1.0 ? exprs[i] : Expr::scale(w, exprs[i]));
    }
    if (terms.size() == 1) return terms.front();
    return Expr::sum(std::move(terms));
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind()) {
        case K::Constant: return "(" + fmt(e.number()) + ")";
        case K::Variable: return "x" + std::to_string(e.index());
        case K::Affine: {
            const auto& f = e.form();
            std::string s = "(";
            bool first = true;
            for (const auto& [k, a] : f.terms) {
                if (!first) s += " + ";
                s += fmt(a) + "*x" + std::to_string(k);
                first = false;
            }
            if (first || f.offset != 0.0) {
                if (!first) s += " + ";
                s += fmt(f.offset);
            }
            return s + ")";
        }
        case K::Sum: {
            std::string s = "(";
            for (std::size_t i = 0; i < e.children().size(); ++i) {
                if (i) s += " + ";
                s += to_string(*e.children()[i]);
            }
            return s + ")";
        }
        case K::Difference:
            return "(" + to_string(*e.children()[0]) + " - " + to_string(*e.children()[1]) + ")";
        case K::Scale: return fmt(e.number()) + "*" + to_string(*e.children()[0]);
        case K::Square: return "sqr(" + to_string(*e.children()[0]) + ")";
        case K::Power: return "pow(" + to_string(*e.children()[0]) + ", " + fmt(e.number()) + ")";
        case K::Exp: return "exp(" + to_string(*e.children()[0]) + ")";
        case K::Norm2: {
            std::string s = "norm2(";
            for (std::size_t i = 0; i < e.children().size(); ++i) {
                if (i) s += ", ";
                s += to_string(*e.children()[i]);
            }
            return s + ")";
        }
    }
    return "";
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind() != b.kind()) return false;
    using K = Expr::Kind;
    switch (a.kind()) {
        case K::Constant: return a.number() == b.number();
        case K::Variable: return a.index() == b.index();
        case K::Affine: return a.form() == b.form();
        case K::Scale:
        case K::Power:
            if (a.number() != b.number()) return false;
            break;
        default: break;
    }
    if (a.children().size() != b.children().size()) return false;
    for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!structurally_equal(*a.children()[i], *b.children()[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    ExprPtr parse_all() {
        auto e = parse_expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        std::size_t end = pos_;
        while (end < s_.size() && !std::isspace(static_cast<unsigned char>(s_[end]))) ++end;
        std::string tok = pos_ < s_.size() ? s_.substr(pos_, std::max<std::size_t>(1, end - pos_)) : "<end>";
        throw ParseError(msg + " at position " + std::to_string(pos_) + " near '" + tok + "'", pos_, tok);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    static ExprPtr fold(const ExprPtr& e) {
        if (e->is_constant() && e->kind() != Expr::Kind::Constant) return Expr::constant(evaluate(*e, Vec()));
        return e;
    }

    ExprPtr parse_expr() {
        ExprPtr acc = parse_term();
        bool fresh_sum = false;
        for (;;) {
            if (accept('+')) {
                ExprPtr t = parse_term();
                std::vector<ExprPtr> kids;
                if (fresh_sum)
                    kids = acc->children();
                else
                    kids.push_back(acc);
                kids.push_back(t);
                acc = Expr::sum(std::move(kids));
                fresh_sum = true;
            } else if (accept('-')) {
                acc = Expr::difference(acc, parse_term());
                fresh_sum = false;
            } else {
                break;
            }
        }
        return fold(acc);
    }

    ExprPtr parse_term() {
        double factor = 1.0;
        bool any_const = false;
        ExprPtr nonconst;
        do {
            ExprPtr f = parse_factor();
            if (f->is_constant()) {
                factor *= evaluate(*f, Vec());
                any_const = true;
            } else {
                if (nonconst) fail("product of two non-constant factors");
                nonconst = f;
            }
        } while (accept('*'));
        if (!nonconst) return Expr::constant(factor);
        if (!any_const) return nonconst;
        return Expr::scale(factor, nonconst);
    }

    std::string ident() {
        std::size_t b = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return s_.substr(b, pos_ - b);
    }

    double number() {
        skip();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        if (pos_ >= s_.size() || !(std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            fail("expected number");
        double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    double signed_number() {
        skip();
        bool neg = false;
        while (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            neg ^= s_[pos_] == '-';
            ++pos_;
            skip();
        }
        double v = number();
        return neg ? -v : v;
    }

    ExprPtr parse_factor() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '-') {
            ++pos_;
            return fold(Expr::scale(-1.0, parse_factor()));
        }
        if (c == '(') {
            ++pos_;
            auto e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(number());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            std::string id = ident();
            if (id.size() > 1 && id[0] == 'x' &&
                std::all_of(id.begin() + 1, id.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
                int k = std::stoi(id.substr(1));
                if (k < 1) {
                    pos_ = start;
                    fail("variable index must be >= 1");
                }
                return Expr::variable(k);
            }
            if (id == "sqr") {
                expect('(');
                auto a = parse_expr();
                expect(')');
                return fold(Expr::square(a));
            }
            if (id == "exp") {
                expect('(');
                auto a = parse_expr();
                expect(')');
                return fold(Expr::exp(a));
            }
            if (id == "pow") {
                expect('(');
                auto a = parse_expr();
                expect(',');
                double p = signed_number();
                expect(')');
                return fold(Expr::power(a, p));
            }
            if (id == "norm2") {
                expect('(');
                std::vector<ExprPtr> args{parse_expr()};
                while (accept(',')) args.push_back(parse_expr());
                expect(')');
                return fold(Expr::norm2(std::move(args)));
            }
            pos_ = start;
            fail("unknown identifier '" + id + "'");
        }
        fail("unexpected character");
    }
};

}  // namespace

ExprPtr parse_expression(const std::string& text) { return Parser(text).parse_all(); }

}  // namespace cvop
