#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "graphsplit/numlin.hpp"
#include "graphsplit/operators.hpp"
#include "graphsplit/scheme.hpp"

namespace graphsplit {

enum class DualMode { FullZ, ReducedV };
DualMode parse_dual_mode(const std::string& s);
std::string to_string(DualMode m);

struct SolverConfig {
  double gamma = 0.0;
  double lambda = 0.0;
  std::vector<double> lambda_schedule;  // per-iteration values; the last one repeats
  Regularity regularity = Regularity::Cocoercive;
  std::size_t max_iters = 1000;
  double residual_tol = 0.0;            // <= 0 disables
  std::optional<double> error_tol;      // stop once relative error falls below
  DualMode mode = DualMode::FullZ;
  std::size_t record_every = 1;
  bool validate_ranges = true;
  bool timing = false;
  std::optional<Block> initial_dual;    // z (m x d) or v (n x d) depending on mode
  std::optional<Vector> reference;      // overrides problem.reference

  double lambda_at(std::size_t k) const;
};

struct SolverState {
  DualMode mode = DualMode::FullZ;
  Block dual;  // z^k, or v^k = M z^k in reduced mode
  Block x;     // x^k from the last sweep
  Block forward_r;  // B_j(sum_l R_jl x_l), rows for j < p
  Block forward_p;  // B_j(sum_l P_lj x_l), zero rows when unused
  std::size_t k = 0;
  double mtx_norm = 0.0;  // ||M^T x^k||_F
};

struct TraceRow {
  std::size_t k = 0;
  double residual = 0.0;
  double consensus_gap = 0.0;
  std::optional<double> relative_error;
  std::optional<double> elapsed_seconds;
  double ergodic_residual = 0.0;  // ||(1/(k+1)) sum_t M^T x^t||
};

struct SolveResult {
  SolverState state;
  std::vector<TraceRow> trace;
  bool converged = false;
  std::size_t iterations = 0;
  Vector consensus;  // mean of the final x_i
  ParameterRanges ranges;
};

/// One pass of the iteration for a fixed scheme and problem.
class Engine {
 public:
  Engine(const CoefficientScheme& scheme, const ProblemInstance& problem);

  /// Forward sweep: computes x from y = M z (or v).
  Block sweep(const Block& y, double gamma, Block* forward_r = nullptr, Block* forward_p = nullptr) const;
  void step(SolverState& st, double gamma, double lambda) const;

  SolverState initial_state(DualMode mode, const std::optional<Block>& dual0) const;
  Block dual_image(const SolverState& st) const;  // M z or v
  double residual(const Block& x) const;
  double residual(const SolverState& st) const;

  const CoefficientScheme& scheme() const { return *scheme_; }
  const ProblemInstance& problem() const { return *problem_; }

 private:
  struct Term {
    std::size_t j;
    double c;
  };
  const CoefficientScheme* scheme_;
  const ProblemInstance* problem_;
  std::vector<std::vector<Term>> n_terms_, pq_terms_, q_terms_;
  std::vector<std::vector<Term>> r_rows_, p_cols_;
  std::vector<bool> same_arg_;
  Matrix mmt_;
};

using Observer = std::function<void(const SolverState&)>;

SolveResult solve(const CoefficientScheme& scheme, const ProblemInstance& problem, const SolverConfig& config,
                  const Observer& observer = {});

struct ErgodicFit {
  bool exact_convergence = false;  // ergodic residual identically zero on the tail
  double slope = 0.0;              // d log(ergodic residual) / d log(k+1) over the tail half
  bool flat = false;
};

ErgodicFit ergodic_residual_curve(const std::vector<TraceRow>& trace);

double consensus_gap(const Block& x);
double relative_error(const Block& x, const Vector& reference);

/// Dual point z with x = 1 (x) x_star fixed, given v_i in A_i x_star with
/// sum v_i + sum B_j x_star = 0.
Block dual_from_solution(const CoefficientScheme& scheme, const ProblemInstance& problem, double gamma,
                         const Vector& x_star, const Block& v);

}  // namespace graphsplit
