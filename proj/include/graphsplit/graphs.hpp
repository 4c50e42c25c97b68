#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "graphsplit/numlin.hpp"

namespace graphsplit {

// Undirected edge with 0-based endpoints i < j.
struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;
};

/// Positively weighted simple undirected graph on nodes 0..n-1.
/// Edges are stored in canonical lexicographic order.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_edge(std::size_t i, std::size_t j) const;
  double weight(std::size_t i, std::size_t j) const;  // 0 when absent
  double degree(std::size_t i) const;
  bool connected() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  Matrix w_;  // dense symmetric weight table
};

/// Connected spanning subgraph G' of a parent G with weights 0 < mu^2 <= w.
/// Edge weights hold mu^2.
class SubgraphWeights {
 public:
  SubgraphWeights() = default;
  SubgraphWeights(const WeightedGraph& parent, std::vector<Edge> edges);

  const WeightedGraph& parent() const { return parent_; }
  const WeightedGraph& graph() const { return sub_; }
  std::size_t n() const { return sub_.n(); }
  const std::vector<Edge>& edges() const { return sub_.edges(); }

 private:
  WeightedGraph parent_;
  WeightedGraph sub_;
};

enum class Topology { Sequential, Ring, StarFirst, StarLast, Complete };

Topology parse_topology(const std::string& name);
std::string to_string(Topology t);

using WeightFn = std::function<double(std::size_t, std::size_t)>;

WeightedGraph build_topology(Topology kind, std::size_t n, const WeightFn& weight);
WeightedGraph build_topology(Topology kind, std::size_t n, double weight = 1.0);

/// Subgraph using every edge of `parent` with the given mu^2 values.
SubgraphWeights same_edges(const WeightedGraph& parent, const WeightFn& mu2);
SubgraphWeights subgraph_of(const WeightedGraph& parent, Topology kind, const WeightFn& mu2);

/// n x m weighted incidence: +mu at the lower endpoint, -mu at the higher.
/// `flip[e]` reverses the orientation of edge e.
Matrix incidence(const SubgraphWeights& g, const std::vector<bool>& flip = {});
Matrix incidence(const WeightedGraph& g, const std::vector<bool>& flip = {});

Matrix laplacian(const WeightedGraph& g);
Matrix laplacian(const SubgraphWeights& g);
Matrix degree_matrix(const WeightedGraph& g);

/// Strictly lower part of the weight table: N_ij = w_ji for i > j.
Matrix lower_weights(const WeightedGraph& g);

/// 0-based position of edge (i, j), i < j, in the canonical order of K_n.
std::size_t complete_edge_index(std::size_t n, std::size_t i, std::size_t j);

}  // namespace graphsplit
