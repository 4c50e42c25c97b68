#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphsplit/graphs.hpp"
#include "graphsplit/operators.hpp"
#include "graphsplit/scheme.hpp"

namespace graphsplit {

enum class PresetId {
  GraphFb,
  GraphFrb,
  SeqFb,
  SeqFrb,
  ParUpFdr,
  ParUpFadr,
  ParDownFdr,
  ParDownFadr,
  Complete,
  CompleteStar,
  DavisYin,
  FrbClassic,
  Ryu,
  ProductSpaceUp,
  ProductSpaceDown,
};

PresetId parse_preset(const std::string& name);
std::string to_string(PresetId id);
const std::vector<PresetId>& all_presets();

struct PresetSpec {
  PresetId id = PresetId::SeqFb;
  std::size_t n = 3;  // resolvent operators of the problem
  std::optional<Regularity> regularity;  // complete and complete_star only
  int pqr = 1;                           // complete and complete_star: 1 or 2
  double w = 1.0;
  double mu2 = 1.0;
  WeightFn w_fn;    // overrides w
  WeightFn mu2_fn;  // overrides mu2
  double w1n = 1.0;  // seq_fb closing edge; 0 gives the sequential graph
  double w13 = 0.0;  // frb_classic
  std::optional<SubgraphWeights> graphs;  // graph_fb / graph_frb
};

struct PresetMetadata {
  std::string name;
  Regularity regularity = Regularity::Cocoercive;
  std::string description;
  // Node that carries an inserted zero resolvent, when the scheme has one more node than the problem.
  std::optional<std::size_t> zero_resolvent_at;
  // Factors mapping scheme variables to the oracle's.
  double z_scale = 1.0;
  double gamma_scale = 1.0;
  double lambda_scale = 1.0;
};

struct Preset {
  CoefficientScheme scheme;
  SubgraphWeights graphs;
  PresetMetadata meta;

  /// Problem with the zero operator inserted where the scheme expects it.
  ProblemInstance adapt(const ProblemInstance& problem) const;
};

Preset make_preset(const PresetSpec& spec);

/// h(i) for the graph forward-backward schemes: largest neighbour j < i in g, else i - 1.
std::size_t predecessor_in(const WeightedGraph& g, std::size_t i);

// Closed-form recursions the presets reduce to. Each returns one block per iteration.

std::vector<Block> oracle_davis_yin(const ResolventOperator& a1, const ResolventOperator& a2,
                                    const ForwardOperator& b, double gamma_hat, double lambda_hat,
                                    Vector zhat, std::size_t iters);

/// x+ = J_{gA}((1-w13)x + w13 x- - 2gBx + gBx-), started from (x_prev, x_cur); returns x^2.. onward.
std::vector<Vector> oracle_frb(const ResolventOperator& a, const ForwardOperator& b, double gamma, double w13,
                               Vector x_prev, Vector x_cur, std::size_t iters);

std::vector<Block> oracle_ryu(const std::vector<ResolventOperator>& a, double gamma_hat, double lambda_hat,
                              Block zhat, std::size_t iters);

std::vector<Block> oracle_product_space_up(const std::vector<ResolventOperator>& a,
                                           const std::vector<ForwardOperator>& b, double gamma, double lambda,
                                           Block z, std::size_t iters);

std::vector<Block> oracle_product_space_down(const std::vector<ResolventOperator>& a,
                                             const std::vector<ForwardOperator>& b, double gamma, double lambda,
                                             Block z, std::size_t iters);

struct ReductionResult {
  std::string name;
  std::size_t iterations = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string matching;
};

std::vector<ReductionResult> reduction_suite(std::uint64_t seed, std::size_t iters = 200, double tol = 1e-10);

}  // namespace graphsplit
