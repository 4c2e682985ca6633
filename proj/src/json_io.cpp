#include "cvop/json_io.hpp"

namespace cvop {

Json to_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json to_json(const std::vector<Vec>& vs) {
    Json a = Json::array();
    for (const auto& v : vs) a.push_back(to_json(v));
    return a;
}

Json to_json(const Polyhedron& p) {
    Json j = Json::object();
    Json hs = Json::array();
    if (p.has_hrep)
        for (const auto& h : p.halfspaces) hs.push_back({{"w", to_json(h.normal)}, {"gamma", h.offset}});
    j["halfspaces"] = hs;
    j["vertices"] = p.has_vrep ? to_json(p.vertices) : Json::array();
    j["rays"] = p.has_vrep ? to_json(p.rays) : Json::array();
    if (p.has_vrep && !p.lines.empty()) j["lines"] = to_json(p.lines);
    return j;
}

Json to_json(const IterationRecord& r) {
    Json j = {{"iter", r.iter},
              {"d", to_json(r.d)},
              {"r_tilde", to_json(r.r_tilde)},
              {"dist", r.dist},
              {"action", to_string(r.action)}};
    j["new_y_out"] = r.action == LoopAction::Cut ? to_json(r.new_y_out) : Json(nullptr);
    if (r.action == LoopAction::InnerUpdate) j["new_y_in"] = to_json(r.added);
    return j;
}

namespace {

Json iterations(const ConeApproximation& a) {
    Json it = Json::array();
    for (const auto& r : a.log) it.push_back(to_json(r));
    return it;
}

}  // namespace

Json solution_json(const EpsDeltaSolution& sol) {
    Json j;
    j["status"] = to_string(sol.status);
    j["epsilon"] = sol.epsilon;
    j["delta"] = sol.delta;
    j["xbar"] = to_json(sol.xbar);
    j["tbar"] = to_json(sol.tbar);
    j["y_out"] = to_json(sol.y_out);
    j["y_in"] = to_json(sol.y_in);
    j["outer_hrep"] = to_json(sol.outer);
    j["inner_vrep"] = to_json(sol.inner);
    j["rounds"] = sol.rounds;
    j["scalarizations"] = sol.scalarizations;
    j["max_gap"] = sol.max_gap;
    j["recession_status"] = to_string(sol.approx.status);
    j["iterations"] = iterations(sol.approx);
    if (!sol.message.empty()) j["message"] = sol.message;
    return j;
}

Json approximation_json(const ProblemSpec& spec, const ConeApproximation& a, double delta) {
    Json j;
    j["status"] = to_string(a.status);
    j["epsilon"] = nullptr;
    j["delta"] = delta;
    j["xbar"] = to_json(a.xbar);
    j["tbar"] = to_json(a.tbar);
    j["y_out"] = to_json(a.y_out);
    j["y_in"] = to_json(a.y_in);
    j["c_hat"] = to_json(a.c_hat);
    j["outer_hrep"] = to_json(a.outer());
    std::vector<Vec> pts;
    for (const auto& x : a.xbar) pts.push_back(spec.objective_values(x));
    j["inner_vrep"] = to_json(Polyhedron::from_vrep(spec.q, pts, a.y_in));
    j["rounds"] = 0;
    j["scalarizations"] = a.scalarizations;
    j["v"] = to_json(a.v);
    j["iterations"] = iterations(a);
    return j;
}

Polyhedron polyhedron_from_json(const Json& j, int dim) {
    auto vec = [](const Json& a) {
        Vec v(static_cast<Eigen::Index>(a.size()));
        for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
        return v;
    };
    Polyhedron p;
    p.dim = dim;
    if (j.contains("halfspaces") && !j["halfspaces"].empty()) {
        p.has_hrep = true;
        for (const auto& h : j["halfspaces"]) p.halfspaces.push_back({vec(h["w"]), h["gamma"].get<double>()});
    }
    if (j.contains("vertices") && !j["vertices"].empty()) {
        p.has_vrep = true;
        for (const auto& v : j["vertices"]) p.vertices.push_back(vec(v));
        for (const auto& r : j["rays"]) p.rays.push_back(vec(r));
        if (j.contains("lines"))
            for (const auto& l : j["lines"]) p.lines.push_back(vec(l));
    }
    return p;
}

}  // namespace cvop
