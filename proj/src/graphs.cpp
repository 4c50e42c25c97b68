#include "graphsplit/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphsplit/error.hpp"

namespace graphsplit {

namespace {

void sort_edges(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
}

std::string edge_name(const Edge& e) {
  return "(" + std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) + ")";
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ == 0) fail(ErrorKind::InvalidInput, "graph needs at least one node");
  w_ = Matrix::Zero(n_, n_);
  for (auto& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i == e.j) fail(ErrorKind::InvalidInput, "self loop at node " + std::to_string(e.i + 1));
    if (e.j >= n_) fail(ErrorKind::InvalidInput, "edge " + edge_name(e) + " outside node range");
    if (!std::isfinite(e.weight) || e.weight <= 0.0)
      fail(ErrorKind::InvalidInput, "edge " + edge_name(e) + " needs a positive finite weight");
    if (w_(e.i, e.j) != 0.0) fail(ErrorKind::InvalidInput, "duplicate edge " + edge_name(e));
    w_(e.i, e.j) = w_(e.j, e.i) = e.weight;
  }
  sort_edges(edges_);
}

bool WeightedGraph::has_edge(std::size_t i, std::size_t j) const {
  return i < n_ && j < n_ && w_(i, j) != 0.0;
}

double WeightedGraph::weight(std::size_t i, std::size_t j) const {
  return (i < n_ && j < n_) ? w_(i, j) : 0.0;
}

double WeightedGraph::degree(std::size_t i) const { return w_.row(i).sum(); }

bool WeightedGraph::connected() const {
  std::vector<std::size_t> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    return parent[a] == a ? a : parent[a] = find(parent[a]);
  };
  std::size_t components = n_;
  for (const auto& e : edges_) {
    auto a = find(e.i), b = find(e.j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

SubgraphWeights::SubgraphWeights(const WeightedGraph& parent, std::vector<Edge> edges)
    : parent_(parent), sub_(parent.n(), std::move(edges)) {
  for (const auto& e : sub_.edges()) {
    const double w = parent_.weight(e.i, e.j);
    if (w == 0.0) fail(ErrorKind::InvalidInput, "subgraph edge " + edge_name(e) + " is not an edge of G");
    if (e.weight > w * (1.0 + 1e-12))
      fail(ErrorKind::InvalidInput, "subgraph edge " + edge_name(e) + " has mu^2 > w");
  }
  if (!sub_.connected()) fail(ErrorKind::InvalidInput, "subgraph is not connected and spanning");
}

Topology parse_topology(const std::string& name) {
  if (name == "sequential") return Topology::Sequential;
  if (name == "ring") return Topology::Ring;
  if (name == "star_first") return Topology::StarFirst;
  if (name == "star_last") return Topology::StarLast;
  if (name == "complete") return Topology::Complete;
  fail(ErrorKind::InvalidConfig, "unknown topology '" + name + "'");
}

std::string to_string(Topology t) {
  switch (t) {
    case Topology::Sequential: return "sequential";
    case Topology::Ring: return "ring";
    case Topology::StarFirst: return "star_first";
    case Topology::StarLast: return "star_last";
    case Topology::Complete: return "complete";
  }
  return "?";
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> topology_pairs(Topology kind, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  switch (kind) {
    case Topology::Sequential:
      for (std::size_t i = 0; i + 1 < n; ++i) out.emplace_back(i, i + 1);
      break;
    case Topology::Ring:
      for (std::size_t i = 0; i + 1 < n; ++i) out.emplace_back(i, i + 1);
      if (n > 2) out.emplace_back(0, n - 1);
      break;
    case Topology::StarFirst:
      for (std::size_t j = 1; j < n; ++j) out.emplace_back(0, j);
      break;
    case Topology::StarLast:
      for (std::size_t i = 0; i + 1 < n; ++i) out.emplace_back(i, n - 1);
      break;
    case Topology::Complete:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
      break;
  }
  return out;
}

}  // namespace

WeightedGraph build_topology(Topology kind, std::size_t n, const WeightFn& weight) {
  if (n < 2) fail(ErrorKind::InvalidInput, "topology needs n >= 2");
  std::vector<Edge> edges;
  for (auto [i, j] : topology_pairs(kind, n)) edges.push_back({i, j, weight(i, j)});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph build_topology(Topology kind, std::size_t n, double weight) {
  return build_topology(kind, n, [weight](std::size_t, std::size_t) { return weight; });
}

SubgraphWeights same_edges(const WeightedGraph& parent, const WeightFn& mu2) {
  std::vector<Edge> edges;
  for (const auto& e : parent.edges()) edges.push_back({e.i, e.j, mu2(e.i, e.j)});
  return SubgraphWeights(parent, std::move(edges));
}

SubgraphWeights subgraph_of(const WeightedGraph& parent, Topology kind, const WeightFn& mu2) {
  std::vector<Edge> edges;
  for (auto [i, j] : topology_pairs(kind, parent.n())) edges.push_back({i, j, mu2(i, j)});
  return SubgraphWeights(parent, std::move(edges));
}

namespace {

Matrix incidence_of(const WeightedGraph& g, const std::vector<bool>& flip) {
  const auto& edges = g.edges();
  if (!flip.empty() && flip.size() != edges.size())
    fail(ErrorKind::InvalidInput, "orientation vector length does not match edge count");
  Matrix m = Matrix::Zero(g.n(), edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double mu = std::sqrt(edges[e].weight);
    const double s = (!flip.empty() && flip[e]) ? -1.0 : 1.0;
    m(edges[e].i, e) = s * mu;
    m(edges[e].j, e) = -s * mu;
  }
  return m;
}

}  // namespace

Matrix incidence(const SubgraphWeights& g, const std::vector<bool>& flip) {
  return incidence_of(g.graph(), flip);
}

Matrix incidence(const WeightedGraph& g, const std::vector<bool>& flip) { return incidence_of(g, flip); }

Matrix degree_matrix(const WeightedGraph& g) {
  Vector d(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) d(i) = g.degree(i);
  return d.asDiagonal();
}

Matrix laplacian(const WeightedGraph& g) {
  Matrix l = degree_matrix(g);
  for (const auto& e : g.edges()) {
    l(e.i, e.j) -= e.weight;
    l(e.j, e.i) -= e.weight;
  }
  return l;
}

Matrix laplacian(const SubgraphWeights& g) { return laplacian(g.graph()); }

Matrix lower_weights(const WeightedGraph& g) {
  Matrix n = Matrix::Zero(g.n(), g.n());
  for (const auto& e : g.edges()) n(e.j, e.i) = e.weight;
  return n;
}

std::size_t complete_edge_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i >= j || j >= n) fail(ErrorKind::InvalidInput, "complete_edge_index needs i < j < n");
  // 1-based offset s(i) = (i-1)(2n-i)/2
  const std::size_t i1 = i + 1;
  const std::size_t s = (i1 - 1) * (2 * n - i1) / 2;
  return s + (j - i) - 1;
}

}  // namespace graphsplit
