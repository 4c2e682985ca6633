#include "cvop/problem.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace cvop {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Vec parse_numbers(const std::string& rest, int line) {
    std::istringstream is(rest);
    std::vector<double> vals;
    std::string tok;
    while (is >> tok) {
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw ProblemError(ProblemError::Kind::Syntax, "malformed number '" + tok + "'", line);
        vals.push_back(v);
    }
    Vec v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
    return v;
}

// Walks every Power node; `f` receives the (canonical) argument.
void for_each_power(const Expr& e, const std::function<void(const Expr&)>& f) {
    if (e.kind() == Expr::Kind::Power) f(*e.children()[0]);
    for (const auto& c : e.children()) for_each_power(*c, f);
}

bool guards(const AffineForm& g, const AffineForm& a) {
    // g <= 0 must be equivalent to a >= 0, i.e. g = -kappa * a with kappa > 0.
    if (g.terms.size() != a.terms.size() || a.terms.empty()) return false;
    const double kappa = -g.terms[0].second / a.terms[0].second;
    if (!(kappa > 0.0)) return false;
    auto close = [&](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)}); };
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (g.terms[i].first != a.terms[i].first) return false;
        if (!close(g.terms[i].second, -kappa * a.terms[i].second)) return false;
    }
    return close(g.offset, -kappa * a.offset);
}

void validate(ProblemSpec& spec) {
    using K = ProblemError::Kind;
    if (spec.n < 1) throw ProblemError(K::Validation, "n >= 1 required ('vars' missing or invalid)");
    if (spec.q < 2) throw ProblemError(K::Validation, "q >= 2 required");
    if (spec.constraints.empty() && !spec.free)
        throw ProblemError(K::Validation, "at least one constraint or the 'free' marker is required");
    auto check_vars = [&](const ExprPtr& e, const std::string& what) {
        if (e->max_variable() > spec.n)
            throw ProblemError(K::Validation, what + " references x" + std::to_string(e->max_variable()) +
                                                  " but vars is " + std::to_string(spec.n));
    };
    for (std::size_t i = 0; i < spec.objectives.size(); ++i) check_vars(spec.objectives[i], "objective " + std::to_string(i + 1));
    for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
        check_vars(spec.constraints[i], "constraint " + std::to_string(i + 1));
        if (spec.constraints[i]->curvature() == Curvature::Unknown)
            throw ProblemError(K::Convexity, "constraint " + std::to_string(i + 1) + " is not verified convex: " +
                                                 to_string(*spec.constraints[i]));
    }
    if (spec.start && spec.start->size() != spec.n)
        throw ProblemError(K::Validation, "start point has " + std::to_string(spec.start->size()) + " entries, expected " +
                                              std::to_string(spec.n));

    // Guarded powers need an affine constraint equivalent to "argument >= 0".
    const auto aff = affine_constraints(spec);
    auto check_guard = [&](const Expr& arg) {
        auto a = as_affine(arg);
        if (!a) return;  // curvature calculus already rejects non-affine arguments
        if (a->terms.empty()) return;
        for (const auto& g : aff)
            if (g && guards(*g, *a)) return;
        throw ProblemError(K::Convexity, "pow argument " + to_string(arg) + " has no guard constraint keeping it nonnegative");
    };
    for (const auto& e : spec.objectives) for_each_power(*e, check_guard);
    for (const auto& e : spec.constraints) for_each_power(*e, check_guard);

    for (const auto& g : spec.cone_generators)
        if (g.size() != spec.q) throw ProblemError(K::Cone, "cone vector has wrong length");
    for (const auto& g : spec.cone_duals)
        if (g.size() != spec.q) throw ProblemError(K::Cone, "cone vector has wrong length");
    spec.cone = make_ordering_cone(spec.q, spec.cone_generators, spec.cone_duals);

    auto rep = verify_C_convexity(spec);
    if (!rep.ok) throw ProblemError(K::Convexity, rep.message);
}

}  // namespace

OrderingCone make_ordering_cone(int q, const std::vector<Vec>& gens, const std::vector<Vec>& duals) {
    using K = ProblemError::Kind;
    if (gens.empty() && duals.empty()) throw ProblemError(K::Cone, "no ordering cone given");
    if (!gens.empty() && !duals.empty()) throw ProblemError(K::Cone, "give either cone generators or dual generators, not both");
    for (const auto& g : gens)
        if (g.cwiseAbs().maxCoeff() == 0.0) throw ProblemError(K::Cone, "cone generator is zero");
    for (const auto& g : duals)
        if (g.cwiseAbs().maxCoeff() == 0.0) throw ProblemError(K::Cone, "dual cone generator is zero");
    OrderingCone oc;
    oc.cone = gens.empty() ? cone_from_normals(q, duals) : cone_from_generators(q, gens);
    if (!oc.cone.nontrivial) throw ProblemError(K::Cone, "ordering cone is trivial");
    if (!oc.cone.pointed) throw ProblemError(K::Cone, "ordering cone is not pointed");
    if (!oc.cone.solid) throw ProblemError(K::Cone, "ordering cone is not solid");
    oc.R = oc.cone.generators;
    Vec s = Vec::Zero(q);
    for (const auto& r : oc.R) s += r;
    oc.c = l1_normalized(s);
    for (const auto& z : oc.cone.normals) oc.Rstar.push_back(z / oc.c.dot(z));
    return oc;
}

Vec ProblemSpec::objective_values(const Vec& x) const {
    Vec y(q);
    for (int i = 0; i < q; ++i) y(i) = evaluate(*objectives[static_cast<std::size_t>(i)], x);
    return y;
}

std::vector<std::optional<AffineForm>> affine_constraints(const ProblemSpec& spec) {
    std::vector<std::optional<AffineForm>> out;
    for (const auto& g : spec.constraints) out.push_back(as_affine(*g));
    return out;
}

ConvexityReport verify_C_convexity(const ProblemSpec& spec) {
    ConvexityReport rep;
    bool all_affine = true;
    for (const auto& o : spec.objectives) all_affine = all_affine && o->curvature() == Curvature::Affine;
    if (all_affine) return rep;
    for (std::size_t j = 0; j < spec.cone.Rstar.size(); ++j) {
        const Vec& z = spec.cone.Rstar[j];
        for (int i = 0; i < spec.q; ++i) {
            const auto cur = spec.objectives[static_cast<std::size_t>(i)]->curvature();
            const double w = z(i);
            const bool fine = w == 0.0 || cur == Curvature::Affine || (w > 0.0 && cur == Curvature::Convex);
            if (!fine) {
                rep.ok = false;
                rep.generator = static_cast<int>(j);
                rep.component = i;
                std::ostringstream os;
                os << "objective vector is not verified C-convex: dual generator (";
                for (int k = 0; k < spec.q; ++k) os << (k ? ", " : "") << z(k);
                os << ") puts weight " << w << " on objective " << i + 1 << " ("
                   << to_string(*spec.objectives[static_cast<std::size_t>(i)]) << ", " << to_string(cur) << ")";
                rep.message = os.str();
                return rep;
            }
        }
        // The combined expression must also pass the calculus.
        if (weighted_sum(spec.objectives, z)->curvature() == Curvature::Unknown) {
            rep.ok = false;
            rep.generator = static_cast<int>(j);
            rep.message = "weighted objective sum for dual generator " + std::to_string(j + 1) + " is not verified convex";
            return rep;
        }
    }
    return rep;
}

ProblemSpec parse_problem(const std::string& text) {
    using K = ProblemError::Kind;
    ProblemSpec spec;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    auto expr_of = [&](const std::string& s) -> ExprPtr {
        try {
            return canonicalize(parse_expression(s));
        } catch (const ParseError& e) {
            const bool unknown = std::string(e.what()).find("unknown identifier") != std::string::npos;
            throw ProblemError(unknown ? K::UnknownIdentifier : K::Syntax, e.what(), line);
        } catch (const DomainError& e) {
            throw ProblemError(K::Validation, e.what(), line);
        }
    };
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto sp = s.find_first_of(" \t");
        const std::string key = s.substr(0, sp);
        const std::string rest = sp == std::string::npos ? "" : trim(s.substr(sp));
        if (key == "vars") {
            Vec v = parse_numbers(rest, line);
            if (v.size() != 1 || v(0) < 1 || v(0) != std::floor(v(0)))
                throw ProblemError(K::Syntax, "'vars' expects one positive integer", line);
            spec.n = static_cast<int>(v(0));
        } else if (key == "objective") {
            if (rest.empty()) throw ProblemError(K::Syntax, "empty objective", line);
            spec.objectives.push_back(expr_of(rest));
        } else if (key == "constraint") {
            if (rest.empty()) throw ProblemError(K::Syntax, "empty constraint", line);
            spec.constraints.push_back(expr_of(rest));
        } else if (key == "cone") {
            const auto sp2 = rest.find_first_of(" \t");
            const std::string kind = rest.substr(0, sp2);
            const std::string nums = sp2 == std::string::npos ? "" : rest.substr(sp2);
            if (kind == "generator")
                spec.cone_generators.push_back(parse_numbers(nums, line));
            else if (kind == "dual")
                spec.cone_duals.push_back(parse_numbers(nums, line));
            else
                throw ProblemError(K::Syntax, "expected 'cone generator' or 'cone dual'", line);
        } else if (key == "free") {
            spec.free = true;
        } else if (key == "name") {
            spec.name = rest;
        } else if (key == "start") {
            spec.start = parse_numbers(rest, line);
        } else {
            throw ProblemError(K::UnknownIdentifier, "unknown directive '" + key + "'", line);
        }
    }
    spec.q = static_cast<int>(spec.objectives.size());
    validate(spec);
    return spec;
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ProblemError(ProblemError::Kind::Validation, "cannot open problem file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_problem(ss.str());
}

std::string serialize(const ProblemSpec& spec) {
    std::ostringstream os;
    auto vec = [&](const Vec& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << fmt(v(i));
        os << '\n';
    };
    if (!spec.name.empty()) os << "name " << spec.name << '\n';
    os << "vars " << spec.n << '\n';
    if (spec.free) os << "free\n";
    for (const auto& o : spec.objectives) os << "objective " << to_string(*o) << '\n';
    for (const auto& g : spec.constraints) os << "constraint " << to_string(*g) << '\n';
    for (const auto& g : spec.cone_generators) {
        os << "cone generator";
        vec(g);
    }
    for (const auto& g : spec.cone_duals) {
        os << "cone dual";
        vec(g);
    }
    if (spec.start) {
        os << "start";
        vec(*spec.start);
    }
    return os.str();
}

bool same_problem(const ProblemSpec& a, const ProblemSpec& b) {
    auto same_list = [](const std::vector<ExprPtr>& x, const std::vector<ExprPtr>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!structurally_equal(*x[i], *y[i])) return false;
        return true;
    };
    auto same_vecs = [](const std::vector<Vec>& x, const std::vector<Vec>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].size() != y[i].size() || x[i] != y[i]) return false;
        return true;
    };
    const bool starts = (!a.start && !b.start) || (a.start && b.start && *a.start == *b.start);
    return a.name == b.name && a.n == b.n && a.q == b.q && a.free == b.free && same_list(a.objectives, b.objectives) &&
           same_list(a.constraints, b.constraints) && same_vecs(a.cone_generators, b.cone_generators) &&
           same_vecs(a.cone_duals, b.cone_duals) && starts;
}

}  // namespace cvop
