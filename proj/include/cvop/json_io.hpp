#pragma once

#include <json.hpp>

#include "cvop/benson.hpp"

namespace cvop {

using Json = nlohmann::json;

Json to_json(const Vec& v);
Json to_json(const std::vector<Vec>& vs);
Json to_json(const Polyhedron& p);
Json to_json(const IterationRecord& r);

/// Solution document: status, epsilon, delta, xbar, tbar, y_out, y_in,
/// outer_hrep, inner_vrep, rounds, scalarizations (plus the iteration log).
Json solution_json(const EpsDeltaSolution& sol);

/// Same schema for a run that stops after the recession cone approximation.
Json approximation_json(const ProblemSpec& spec, const ConeApproximation& a, double delta);

Polyhedron polyhedron_from_json(const Json& j, int dim);

}  // namespace cvop
