#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphsplit/operators.hpp"
#include "graphsplit/presets.hpp"
#include "graphsplit/solver.hpp"

namespace graphsplit {

ProblemInstance make_ball_qp(const std::vector<Vector>& centers, const std::vector<double>& radii,
                             const std::vector<Matrix>& q);
ProblemInstance gen_ball_qp(std::size_t n, std::size_t d, std::uint64_t seed);

ProblemInstance make_matrix_game(const std::vector<Matrix>& theta);
ProblemInstance gen_matrix_game(std::size_t p, std::size_t d, std::uint64_t seed);

struct ReferenceSolution {
  Vector x;
  double certificate = 0.0;  // optimality residual of x
  double cross_check = 0.0;  // relative gap between the two independent computations
  std::string method;
};

/// Product-space run to residual 1e-12, polished and certified by an active-set Newton solve of the KKT system.
ReferenceSolution ball_qp_reference(const ProblemInstance& problem);
/// Completely mixed equilibrium of the aggregate game from two linear solves.
ReferenceSolution matrix_game_reference(const ProblemInstance& problem);
ReferenceSolution reference_solution(const ProblemInstance& problem);

// Optimality residuals: stationarity with fitted multipliers plus infeasibility, and ||x - P(x - F x)||.
double ball_qp_kkt_residual(const ProblemInstance& problem, const Vector& x);
double game_saddle_residual(const ProblemInstance& problem, const Vector& x);

std::size_t worker_count();  // GRAPHSPLIT_THREADS, else hardware concurrency

struct SweepSpec {
  std::vector<double> gamma_hats;
  std::vector<double> lambda_hats;
  std::size_t max_iters = 1000;
  std::optional<double> error_tol;
  DualMode mode = DualMode::FullZ;
  bool timing = false;
  std::size_t threads = 0;  // 0: worker_count()
};

struct SweepCell {
  double gamma_hat = 0.0;
  double lambda_hat = 0.0;
  double final_error = 0.0;
  std::optional<std::size_t> iters_to_tol;
  std::size_t iterations = 0;
  std::optional<double> seconds;
  bool diverged = false;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // gamma-major order
  std::size_t best = 0;
};

SolverConfig cell_config(const ParameterRanges& ranges, double gamma_hat, double lambda_hat, std::size_t iters);

/// `problem` must already match the scheme (see Preset::adapt).
SweepResult sweep(const CoefficientScheme& scheme, Regularity reg, const ProblemInstance& problem,
                  const Vector& reference, const SweepSpec& spec);

std::vector<double> default_grid();  // 0.1, 0.2, ..., 0.9

struct SuiteEntry {
  std::string label;
  PresetSpec spec;
};

/// The seven schemes compared in each experiment, sized for n resolvent operators.
std::vector<SuiteEntry> cocoercive_suite(std::size_t n);
std::vector<SuiteEntry> lipschitz_suite(std::size_t n);

}  // namespace graphsplit
