#include "graphsplit/json_io.hpp"

#include <fstream>
#include <sstream>

#include "graphsplit/error.hpp"

namespace graphsplit {

namespace {

const Json& field(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::InvalidInput, ctx + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const Json& j, const std::string& ctx) {
  if (!j.is_number()) fail(ErrorKind::InvalidInput, ctx + ": expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const std::string& ctx) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    fail(ErrorKind::InvalidInput, ctx + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

std::size_t node_label(const Json& j, std::size_t n, const std::string& ctx) {
  const auto v = count(j, ctx);
  if (v < 1 || v > n) fail(ErrorKind::InvalidInput, ctx + ": node label out of range 1.." + std::to_string(n));
  return v - 1;
}

std::vector<Edge> edges_from_json(const Json& arr, std::size_t n, const std::string& ctx) {
  if (!arr.is_array()) fail(ErrorKind::InvalidInput, ctx + ": expected an array of [i, j, weight]");
  std::vector<Edge> edges;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 3) fail(ErrorKind::InvalidInput, ctx + ": each edge must be [i, j, weight]");
    edges.push_back({node_label(e[0], n, ctx), node_label(e[1], n, ctx), number(e[2], ctx)});
  }
  return edges;
}

}  // namespace

Json to_json(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from_json(const Json& j, const std::string& name) {
  if (j.is_array()) {
    // bare list of rows
    const std::size_t cols = j.empty() ? 0 : (j[0].is_array() ? j[0].size() : 0);
    return matrix_from_json(Json{{"rows", j.size()}, {"cols", cols}, {"data", j}}, name);
  }
  const auto rows = count(field(j, "rows", name), name + ".rows");
  const auto cols = count(field(j, "cols", name), name + ".cols");
  const Json& data = field(j, "data", name);
  if (!data.is_array()) fail(ErrorKind::InvalidInput, name + ".data must be an array");
  Matrix m(rows, cols);
  // flat row-major, or a list of rows
  if (data.size() == rows * cols && (data.empty() || data[0].is_number())) {
    for (std::size_t k = 0; k < rows * cols; ++k) m(k / cols, k % cols) = number(data[k], name);
  } else if (data.size() == rows) {
    for (std::size_t i = 0; i < rows; ++i) {
      if (!data[i].is_array() || data[i].size() != cols) fail(ErrorKind::InvalidInput, name + ": ragged rows");
      for (std::size_t c = 0; c < cols; ++c) m(i, c) = number(data[i][c], name);
    }
  } else {
    fail(ErrorKind::InvalidInput, name + ": data length does not match rows x cols");
  }
  require_finite(m, name);
  return m;
}

Json to_json_vector(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vector_from_json(const Json& j, const std::string& name) {
  if (!j.is_array()) fail(ErrorKind::InvalidInput, name + " must be an array");
  Vector v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v(k) = number(j[k], name);
  require_finite(v, name);
  return v;
}

Json to_json(const SubgraphWeights& g) {
  Json edges = Json::array(), sub = Json::array();
  for (const auto& e : g.parent().edges()) edges.push_back({e.i + 1, e.j + 1, e.weight});
  for (const auto& e : g.edges()) sub.push_back({e.i + 1, e.j + 1, e.weight});
  return {{"n", g.n()}, {"edges", edges}, {"subgraph", sub}};
}

SubgraphWeights graphs_from_json(const Json& j) {
  const auto n = count(field(j, "n", "graph"), "graph.n");
  WeightedGraph g(n, edges_from_json(field(j, "edges", "graph"), n, "graph.edges"));
  if (!j.contains("subgraph")) return same_edges(g, [&](std::size_t a, std::size_t b) { return g.weight(a, b); });
  return SubgraphWeights(g, edges_from_json(j.at("subgraph"), n, "graph.subgraph"));
}

Json to_json(const CoefficientScheme& s, const std::string& regularity) {
  Json j = {{"format", "graphsplit-scheme"},
            {"n", s.n()},
            {"m", s.m()},
            {"p", s.p()},
            {"M", to_json(s.M())},
            {"N", to_json(s.N())},
            {"P", to_json(s.P())},
            {"Q", to_json(s.Q())},
            {"R", to_json(s.R())},
            {"delta", to_json_vector(s.delta())},
            {"provenance", s.provenance()}};
  if (!regularity.empty()) j["regularity"] = regularity;
  return j;
}

CoefficientScheme scheme_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::InvalidInput, "scheme bundle must be a JSON object");
  Matrix m = matrix_from_json(field(j, "M", "scheme"), "M");
  Matrix n = matrix_from_json(field(j, "N", "scheme"), "N");
  Matrix p = matrix_from_json(field(j, "P", "scheme"), "P");
  Matrix q = j.contains("Q") ? matrix_from_json(j.at("Q"), "Q") : Matrix::Zero(p.rows(), p.cols());
  Matrix r = matrix_from_json(field(j, "R", "scheme"), "R");
  Vector delta = vector_from_json(field(j, "delta", "scheme"), "delta");
  std::string prov = j.value("provenance", Json("")).is_string() ? j.value("provenance", std::string()) : j["provenance"].dump();
  return CoefficientScheme(m, n, p, q, r, delta, prov);
}

namespace {

Json resolvent_json(const ResolventOperator& a) {
  Json j = {{"kind", a.kind()}};
  if (const auto* b = std::get_if<ResolventOperator::Ball>(&a.data())) {
    j["center"] = to_json_vector(b->center);
    j["radius"] = b->radius;
  } else if (const auto* s = std::get_if<ResolventOperator::Simplex>(&a.data())) {
    j["blocks"] = s->blocks;
  } else if (const auto* l = std::get_if<ResolventOperator::Linear>(&a.data())) {
    j["matrix"] = to_json(l->l);
  } else {
    j["dim"] = a.dim();
  }
  return j;
}

ResolventOperator resolvent_from(const Json& j, std::size_t dim) {
  const std::string kind = field(j, "kind", "resolvent").get<std::string>();
  if (kind == "zero") return ResolventOperator::zero(dim);
  if (kind == "normal_cone_ball")
    return ResolventOperator::ball(vector_from_json(field(j, "center", "ball"), "center"),
                                   number(field(j, "radius", "ball"), "radius"));
  if (kind == "normal_cone_simplex") {
    std::vector<std::size_t> blocks;
    if (j.contains("blocks"))
      for (const auto& b : j.at("blocks")) blocks.push_back(count(b, "simplex.blocks"));
    else
      blocks.push_back(dim);
    return ResolventOperator::simplex(blocks);
  }
  if (kind == "linear_monotone") return ResolventOperator::linear(matrix_from_json(field(j, "matrix", kind), kind));
  fail(ErrorKind::InvalidInput, "unknown resolvent kind '" + kind + "'");
}

Json forward_json(const ForwardOperator& b) {
  Json j = {{"kind", b.kind()}, {"lipschitz", b.lipschitz()}, {"cocoercive", b.cocoercive()}};
  if (const auto* q = std::get_if<ForwardOperator::Quadratic>(&b.data()))
    j["matrix"] = to_json(q->q);
  else if (const auto* s = std::get_if<ForwardOperator::Saddle>(&b.data()))
    j["theta"] = to_json(s->theta);
  else
    j["dim"] = b.dim();
  return j;
}

ForwardOperator forward_from(const Json& j, std::size_t dim) {
  const std::string kind = field(j, "kind", "forward").get<std::string>();
  if (kind == "zero") return ForwardOperator::zero(dim);
  if (kind == "quadratic_gradient") return ForwardOperator::quadratic(matrix_from_json(field(j, "matrix", kind), kind));
  if (kind == "bilinear_saddle") return ForwardOperator::saddle(matrix_from_json(field(j, "theta", kind), kind));
  fail(ErrorKind::InvalidInput, "unknown forward kind '" + kind + "'");
}

}  // namespace

Json to_json(const ProblemInstance& p) {
  Json a = Json::array(), b = Json::array();
  for (const auto& r : p.resolvents) a.push_back(resolvent_json(r));
  for (const auto& f : p.forwards) b.push_back(forward_json(f));
  Json j = {{"format", "graphsplit-problem"}, {"kind", p.name},       {"dim", p.dim},
            {"resolvents", a},                {"forwards", b},        {"provenance", p.provenance}};
  if (p.reference) j["reference"] = to_json_vector(*p.reference);
  return j;
}

ProblemInstance problem_from_json(const Json& j) {
  ProblemInstance p;
  p.dim = count(field(j, "dim", "problem"), "problem.dim");
  p.name = j.value("kind", std::string("custom"));
  p.provenance = j.value("provenance", std::string());
  const Json& a = field(j, "resolvents", "problem");
  const Json& b = j.contains("forwards") ? j.at("forwards") : Json::array();
  if (!a.is_array() || !b.is_array()) fail(ErrorKind::InvalidInput, "problem operator lists must be arrays");
  for (const auto& r : a) p.resolvents.push_back(resolvent_from(r, p.dim));
  for (const auto& f : b) p.forwards.push_back(forward_from(f, p.dim));
  if (j.contains("reference")) p.reference = vector_from_json(j.at("reference"), "reference");
  p.validate();
  return p;
}

PresetSpec preset_spec_from_json(const Json& j, std::size_t default_n) {
  PresetSpec s;
  s.id = parse_preset(field(j, "preset", "scheme").get<std::string>());
  s.n = j.contains("n") ? count(j.at("n"), "scheme.n") : default_n;
  if (j.contains("regularity")) s.regularity = parse_regularity(j.at("regularity").get<std::string>());
  if (j.contains("pqr")) s.pqr = static_cast<int>(count(j.at("pqr"), "scheme.pqr"));
  s.w = j.contains("w") ? number(j.at("w"), "scheme.w") : s.w;
  s.mu2 = j.contains("mu2") ? number(j.at("mu2"), "scheme.mu2") : s.mu2;
  s.w1n = j.contains("w1n") ? number(j.at("w1n"), "scheme.w1n") : s.w1n;
  s.w13 = j.contains("w13") ? number(j.at("w13"), "scheme.w13") : s.w13;
  if (j.contains("graph")) s.graphs = graphs_from_json(j.at("graph"));
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Io, "cannot parse '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::Io, "write to '" + path + "' failed");
}

}  // namespace graphsplit
