#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "graphsplit/graphs.hpp"
#include "graphsplit/numlin.hpp"

namespace testing_support {

using namespace graphsplit;

struct GraphPair {
  WeightedGraph g;
  SubgraphWeights sub;
};

// Random connected G on n nodes and a connected spanning G' with mu^2 <= w.
// With `ordered`, every node i > 0 has an earlier neighbour in G'.
inline GraphPair random_graph_pair(Rng& rng, std::size_t n, double extra_edge_prob = 0.4, bool ordered = false) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (!ordered)
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.next() % i]);
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  std::vector<Edge> g_edges, tree;
  auto add = [&](std::size_t a, std::size_t b, std::vector<Edge>& dst) {
    const std::size_t i = std::min(a, b), j = std::max(a, b);
    used[i][j] = true;
    dst.push_back({i, j, rng.uniform(0.5, 2.0)});
  };
  for (std::size_t k = 1; k < n; ++k) add(order[k], order[rng.next() % k], tree);
  g_edges = tree;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!used[i][j] && rng.uniform() < extra_edge_prob) add(i, j, g_edges);
  std::vector<Edge> sub;
  for (const auto& e : g_edges) {
    const bool in_tree = std::any_of(tree.begin(), tree.end(), [&](const Edge& t) { return t.i == e.i && t.j == e.j; });
    if (in_tree || rng.uniform() < 0.5) sub.push_back({e.i, e.j, e.weight * rng.uniform(0.2, 1.0)});
  }
  WeightedGraph g(n, g_edges);
  return {g, SubgraphWeights(g, sub)};
}

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace testing_support
