#pragma once

#include <string>

#include "json.hpp"

#include "graphsplit/graphs.hpp"
#include "graphsplit/numlin.hpp"
#include "graphsplit/operators.hpp"
#include "graphsplit/presets.hpp"
#include "graphsplit/scheme.hpp"

namespace graphsplit {

using Json = nlohmann::json;

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& name = "matrix");
Json to_json_vector(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& name = "vector");

// Graph documents use 1-based node labels.
Json to_json(const SubgraphWeights& g);
SubgraphWeights graphs_from_json(const Json& j);

Json to_json(const CoefficientScheme& s, const std::string& regularity = {});
CoefficientScheme scheme_from_json(const Json& j);

Json to_json(const ProblemInstance& p);
ProblemInstance problem_from_json(const Json& j);

PresetSpec preset_spec_from_json(const Json& j, std::size_t default_n);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace graphsplit
