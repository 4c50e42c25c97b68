#include "graphsplit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "graphsplit/error.hpp"

namespace graphsplit {

ProblemInstance make_ball_qp(const std::vector<Vector>& centers, const std::vector<double>& radii,
                             const std::vector<Matrix>& q) {
  if (centers.size() < 2 || centers.size() != radii.size())
    fail(ErrorKind::InvalidInput, "ball QP needs n >= 2 balls with one radius each");
  if (q.size() + 1 != centers.size()) fail(ErrorKind::InvalidInput, "ball QP needs n - 1 quadratic terms");
  ProblemInstance p;
  p.dim = static_cast<std::size_t>(centers.front().size());
  p.name = "ball_qp";
  for (std::size_t i = 0; i < centers.size(); ++i) p.resolvents.push_back(ResolventOperator::ball(centers[i], radii[i]));
  for (const auto& qj : q) p.forwards.push_back(ForwardOperator::quadratic(qj));
  p.validate();
  return p;
}

ProblemInstance gen_ball_qp(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n < 2 || d < 1) fail(ErrorKind::InvalidInput, "gen_ball_qp needs n >= 2 and d >= 1");
  const Rng root(seed);
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::uint64_t stream = attempt * (3 * n + 2);
    Rng rq = root.substream(stream++);
    Vector q(d);
    for (std::size_t k = 0; k < d; ++k) q(k) = rq.uniform(-1.0, 1.0) + 3.0;
    std::vector<Vector> centers;
    std::vector<double> radii;
    for (std::size_t i = 0; i < n; ++i) {
      Rng rc = root.substream(stream++);
      Vector dir(d);
      for (std::size_t k = 0; k < d; ++k) dir(k) = rc.normal();
      const double len = 0.5 * std::pow(rc.uniform(), 1.0 / static_cast<double>(d));
      Vector c = q + (dir.norm() > 0.0 ? Vector(dir * (len / dir.norm())) : Vector::Zero(d));
      Rng rr = root.substream(stream++);
      radii.push_back((c - q).norm() + rr.uniform(0.5, 1.5));
      centers.push_back(std::move(c));
    }
    bool origin_feasible = true;
    for (std::size_t i = 0; i < n; ++i) origin_feasible = origin_feasible && centers[i].norm() <= radii[i];
    if (origin_feasible) continue;
    std::vector<Matrix> qs;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      Rng rg = root.substream(stream++);
      Matrix g = rg.uniform_matrix(d, d, 0.0, 1.0);
      Matrix qj = g.transpose() * g;
      qj = 0.5 * (qj + qj.transpose()).eval();
      const double target = rg.uniform(0.5, 2.0);
      qs.push_back(qj * (target / spectral_norm(qj)));
    }
    ProblemInstance p = make_ball_qp(centers, radii, qs);
    p.provenance = "gen_ball_qp n=" + std::to_string(n) + " d=" + std::to_string(d) + " seed=" +
                   std::to_string(seed) + " recipe=common-point";
    return p;
  }
}

ProblemInstance make_matrix_game(const std::vector<Matrix>& theta) {
  if (theta.empty()) fail(ErrorKind::InvalidInput, "matrix game needs p >= 1");
  const auto dv = static_cast<std::size_t>(theta.front().rows());
  const auto du = static_cast<std::size_t>(theta.front().cols());
  ProblemInstance p;
  p.dim = du + dv;
  p.name = "matrix_game";
  for (std::size_t i = 0; i < theta.size() + 2; ++i) p.resolvents.push_back(ResolventOperator::simplex({du, dv}));
  for (const auto& t : theta) {
    if (static_cast<std::size_t>(t.rows()) != dv || static_cast<std::size_t>(t.cols()) != du)
      fail(ErrorKind::InvalidInput, "all game matrices must have the same shape");
    p.forwards.push_back(ForwardOperator::saddle(t));
  }
  p.validate();
  return p;
}

ProblemInstance gen_matrix_game(std::size_t p, std::size_t d, std::uint64_t seed) {
  if (p < 1 || d < 1) fail(ErrorKind::InvalidInput, "gen_matrix_game needs p >= 1 and d >= 1");
  const Rng root(seed);
  std::vector<Matrix> theta;
  for (std::size_t j = 0; j < p; ++j) {
    Rng r = root.substream(j);
    Matrix k = static_cast<double>(j + 1) * r.uniform_matrix(d, d, 0.0, 1.0);
    const double s = 1.1 * spectral_norm(k);
    theta.push_back(s * Matrix::Identity(d, d) - k);
  }
  ProblemInstance prob = make_matrix_game(theta);
  prob.provenance = "gen_matrix_game p=" + std::to_string(p) + " d=" + std::to_string(d) + " seed=" +
                    std::to_string(seed);
  return prob;
}

namespace {

struct BallData {
  std::vector<Vector> c;
  std::vector<double> r;
  Matrix g;  // sum of Q_j
};

BallData ball_data(const ProblemInstance& prob) {
  BallData b;
  b.g = Matrix::Zero(prob.dim, prob.dim);
  for (const auto& a : prob.resolvents) {
    const auto* ball = std::get_if<ResolventOperator::Ball>(&a.data());
    if (!ball) fail(ErrorKind::InvalidInput, "ball QP reference needs ball constraints only");
    b.c.push_back(ball->center);
    b.r.push_back(ball->radius);
  }
  for (const auto& f : prob.forwards) {
    if (const auto* q = std::get_if<ForwardOperator::Quadratic>(&f.data()))
      b.g += q->q;
    else if (!std::holds_alternative<ForwardOperator::Zero>(f.data()))
      fail(ErrorKind::InvalidInput, "ball QP reference needs quadratic terms only");
  }
  return b;
}

// Minimizes ||g + A mu|| over mu >= 0 by enumerating supports.
Vector nnls_small(const Matrix& a, const Vector& g) {
  const auto k = a.cols();
  Vector best = Vector::Zero(k);
  double best_res = g.norm();
  if (k == 0) return best;
  if (k > 12) {
    Vector mu = (-a.colPivHouseholderQr().solve(g)).cwiseMax(0.0);
    return mu;
  }
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < k; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    Matrix sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t t = 0; t < idx.size(); ++t) sub.col(static_cast<Eigen::Index>(t)) = a.col(idx[t]);
    Vector m = -sub.colPivHouseholderQr().solve(g);
    if (m.minCoeff() < 0.0) continue;
    const double res = (g + sub * m).norm();
    if (res < best_res) {
      best_res = res;
      best.setZero();
      for (std::size_t t = 0; t < idx.size(); ++t) best(idx[t]) = m(static_cast<Eigen::Index>(t));
    }
  }
  return best;
}

// Active-set Newton on  G x + sum mu_i (x - c_i) = 0,  |x - c_i|^2 = r_i^2 (i active).
Vector newton_kkt(const BallData& b, Vector x) {
  const auto d = x.size();
  const std::size_t n = b.c.size();
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i)
    if ((x - b.c[i]).norm() >= b.r[i] * (1.0 - 1e-4)) active.push_back(i);

  for (int outer = 0; outer < 20; ++outer) {
    const auto k = static_cast<Eigen::Index>(active.size());
    Matrix a(d, k);
    for (Eigen::Index t = 0; t < k; ++t) a.col(t) = x - b.c[active[t]];
    Vector mu = k ? Vector(nnls_small(a, b.g * x)) : Vector();
    for (int it = 0; it < 100; ++it) {
      Vector f(d + k);
      Matrix jac = Matrix::Zero(d + k, d + k);
      f.head(d) = b.g * x;
      jac.topLeftCorner(d, d) = b.g;
      for (Eigen::Index t = 0; t < k; ++t) {
        const Vector diff = x - b.c[active[t]];
        f.head(d) += mu(t) * diff;
        f(d + t) = 0.5 * (diff.squaredNorm() - b.r[active[t]] * b.r[active[t]]);
        jac.topLeftCorner(d, d).diagonal().array() += mu(t);
        jac.block(0, d + t, d, 1) = diff;
        jac.block(d + t, 0, 1, d) = diff.transpose();
      }
      const Vector step = jac.fullPivLu().solve(-f);
      if (!step.allFinite()) break;
      x += step.head(d);
      if (k) mu += step.tail(k);
      if (step.norm() <= 1e-15 * std::max(1.0, x.norm())) break;
    }
    // drop negative multipliers, add violated constraints
    bool changed = false;
    if (k) {
      Eigen::Index worst;
      if (mu.minCoeff(&worst) < -1e-12) {
        active.erase(active.begin() + worst);
        changed = true;
      }
    }
    for (std::size_t i = 0; i < n && !changed; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      if ((x - b.c[i]).norm() > b.r[i] * (1.0 + 1e-12)) {
        active.push_back(i);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return x;
}

}  // namespace

double ball_qp_kkt_residual(const ProblemInstance& problem, const Vector& x) {
  const BallData b = ball_data(problem);
  const Vector gx = b.g * x;
  std::vector<Vector> cols;
  double infeas = 0.0;
  for (std::size_t i = 0; i < b.c.size(); ++i) {
    const double dist = (x - b.c[i]).norm();
    infeas = std::max(infeas, dist - b.r[i]);
    if (dist >= b.r[i] * (1.0 - 1e-7)) cols.push_back((x - b.c[i]) / b.r[i]);
  }
  Matrix a(x.size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t t = 0; t < cols.size(); ++t) a.col(static_cast<Eigen::Index>(t)) = cols[t];
  const Vector mu = nnls_small(a, gx);
  const double stationarity = (gx + a * mu).norm() / std::max(1.0, gx.norm());
  return stationarity + std::max(0.0, infeas);
}

ReferenceSolution ball_qp_reference(const ProblemInstance& problem) {
  problem.validate();
  const BallData b = ball_data(problem);
  const std::size_t n = problem.n();
  ProblemInstance padded = problem;
  while (padded.p() < n) padded = padded.with_zero_forward(padded.p());
  PresetSpec spec;
  spec.id = PresetId::ProductSpaceDown;
  spec.n = n;
  const Preset pre = make_preset(spec);
  const ProblemInstance adapted = pre.adapt(padded);
  const auto ranges = parameter_ranges(pre.scheme, adapted.ell(), Regularity::Cocoercive);
  SolverConfig cfg = ranges.unbounded() ? SolverConfig{} : cell_config(ranges, 0.9, 0.9, 0);
  if (ranges.unbounded()) {
    cfg.gamma = 1.0;
    cfg.lambda = 0.9 * ranges.lambda_max(1.0);
  }
  cfg.max_iters = 2000000;
  cfg.residual_tol = 1e-12;
  cfg.record_every = cfg.max_iters;
  cfg.mode = DualMode::ReducedV;
  const SolveResult run = solve(pre.scheme, adapted, cfg);
  const Vector x_ps = run.consensus;

  ReferenceSolution ref;
  ref.x = newton_kkt(b, x_ps);
  ref.cross_check = (ref.x - x_ps).norm() / std::max(ref.x.norm(), 1e-300);
  ref.certificate = ball_qp_kkt_residual(problem, ref.x);
  ref.method = "product_space_down (" + std::to_string(run.iterations) +
               " iterations) polished by active-set Newton on the KKT system";
  if (!run.converged)
    fail(ErrorKind::Internal, "reference run did not reach residual 1e-12");
  if (ref.cross_check > 1e-8)
    fail(ErrorKind::Internal, "reference cross-check gap " + std::to_string(ref.cross_check) + " exceeds 1e-8");
  if (ref.certificate > 1e-10)
    fail(ErrorKind::Internal, "reference KKT residual " + std::to_string(ref.certificate) + " exceeds 1e-10");
  return ref;
}

namespace {

Matrix aggregate_theta(const ProblemInstance& problem) {
  Matrix theta;
  for (const auto& f : problem.forwards) {
    const auto* s = std::get_if<ForwardOperator::Saddle>(&f.data());
    if (!s) fail(ErrorKind::InvalidInput, "game reference needs bilinear saddle operators");
    theta = theta.size() ? Matrix(theta + s->theta) : s->theta;
  }
  if (!theta.size()) fail(ErrorKind::InvalidInput, "game reference needs p >= 1");
  return theta;
}

}  // namespace

double game_saddle_residual(const ProblemInstance& problem, const Vector& x) {
  Vector f = Vector::Zero(x.size());
  for (const auto& b : problem.forwards) f += b.apply(x);
  const Vector proj = problem.resolvents.front().resolve(1.0, x - f);
  return (x - proj).norm();
}

ReferenceSolution matrix_game_reference(const ProblemInstance& problem) {
  problem.validate();
  const Matrix theta = aggregate_theta(problem);
  if (theta.rows() != theta.cols()) fail(ErrorKind::InvalidInput, "game reference needs square matrices");
  const auto d = theta.rows();
  const Vector ones = Vector::Ones(d);
  auto lu = theta.fullPivLu();
  if (!lu.isInvertible()) fail(ErrorKind::Internal, "aggregate game matrix is singular");
  Vector u = lu.solve(ones);
  Vector v = theta.transpose().fullPivLu().solve(ones);
  u /= u.sum();
  v /= v.sum();
  if (u.minCoeff() <= 0.0 || v.minCoeff() <= 0.0)
    fail(ErrorKind::Internal, "game is not completely mixed; closed-form equilibrium does not apply");
  ReferenceSolution ref;
  ref.x.resize(2 * d);
  ref.x << u, v;
  ref.certificate = game_saddle_residual(problem, ref.x);
  ref.method = "interior equilibrium of the aggregate matrix";
  if (ref.certificate > 1e-10)
    fail(ErrorKind::Internal, "game saddle residual " + std::to_string(ref.certificate) + " exceeds 1e-10");
  return ref;
}

ReferenceSolution reference_solution(const ProblemInstance& problem) {
  if (problem.name == "matrix_game") return matrix_game_reference(problem);
  if (problem.name == "ball_qp") return ball_qp_reference(problem);
  fail(ErrorKind::InvalidConfig, "no reference oracle for problem kind '" + problem.name + "'");
}

std::size_t worker_count() {
  if (const char* env = std::getenv("GRAPHSPLIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SolverConfig cell_config(const ParameterRanges& ranges, double gamma_hat, double lambda_hat, std::size_t iters) {
  if (!(gamma_hat > 0.0 && gamma_hat < 1.0) || !(lambda_hat > 0.0 && lambda_hat <= 1.0))
    fail(ErrorKind::InvalidConfig, "gamma_hat must lie in (0,1) and lambda_hat in (0,1]");
  if (ranges.unbounded())
    fail(ErrorKind::InvalidConfig, "gamma_hat scaling needs a finite gamma_max; give gamma directly");
  SolverConfig cfg;
  cfg.regularity = ranges.regularity;
  cfg.gamma = gamma_hat * *ranges.gamma_max;
  cfg.lambda = lambda_hat * ranges.lambda_max(cfg.gamma);
  cfg.max_iters = iters;
  return cfg;
}

std::vector<double> default_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
  return g;
}

SweepResult sweep(const CoefficientScheme& scheme, Regularity reg, const ProblemInstance& problem,
                  const Vector& reference, const SweepSpec& spec) {
  const auto ranges = parameter_ranges(scheme, problem.ell(), reg);
  SweepResult out;
  for (double g : spec.gamma_hats)
    for (double l : spec.lambda_hats) {
      cell_config(ranges, g, l, spec.max_iters);  // validates the grid up front
      SweepCell cell;
      cell.gamma_hat = g;
      cell.lambda_hat = l;
      out.cells.push_back(cell);
    }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < out.cells.size(); c = next++) {
      SweepCell& cell = out.cells[c];
      SolverConfig cfg = cell_config(ranges, cell.gamma_hat, cell.lambda_hat, spec.max_iters);
      cfg.error_tol = spec.error_tol;
      cfg.mode = spec.mode;
      cfg.record_every = std::max<std::size_t>(spec.max_iters, 1);
      cfg.reference = reference;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const SolveResult r = solve(scheme, problem, cfg);
        cell.final_error = r.trace.back().relative_error.value_or(INFINITY);
        cell.iterations = r.iterations;
        if (spec.error_tol && cell.final_error <= *spec.error_tol) cell.iters_to_tol = r.iterations;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Divergence) throw;
        cell.diverged = true;
        cell.final_error = INFINITY;
      }
      if (spec.timing)
        cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const std::size_t threads = std::min(spec.threads ? spec.threads : worker_count(), out.cells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex mu;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        try {
          worker();
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
          next = out.cells.size();
        }
      });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }
  // cells that hit the tolerance rank by iteration count, the rest by final error
  auto better = [](const SweepCell& a, const SweepCell& b) {
    if (a.iters_to_tol && b.iters_to_tol) return *a.iters_to_tol < *b.iters_to_tol;
    if (a.iters_to_tol || b.iters_to_tol) return a.iters_to_tol.has_value();
    return a.final_error < b.final_error;
  };
  for (std::size_t c = 1; c < out.cells.size(); ++c)
    if (better(out.cells[c], out.cells[out.best])) out.best = c;
  return out;
}

std::vector<SuiteEntry> cocoercive_suite(std::size_t n) {
  auto mk = [n](PresetId id, int pqr = 1) {
    PresetSpec s;
    s.id = id;
    s.n = n;
    s.pqr = pqr;
    s.regularity = Regularity::Cocoercive;
    return s;
  };
  return {{"seq_fb", mk(PresetId::SeqFb)},
          {"par_up_fdr", mk(PresetId::ParUpFdr)},
          {"par_down_fdr", mk(PresetId::ParDownFdr)},
          {"complete_1", mk(PresetId::Complete, 1)},
          {"complete_2", mk(PresetId::Complete, 2)},
          {"complete_star_1", mk(PresetId::CompleteStar, 1)},
          {"complete_star_2", mk(PresetId::CompleteStar, 2)}};
}

std::vector<SuiteEntry> lipschitz_suite(std::size_t n) {
  auto mk = [n](PresetId id, int pqr = 1) {
    PresetSpec s;
    s.id = id;
    s.n = n;
    s.pqr = pqr;
    s.regularity = Regularity::Lipschitz;
    return s;
  };
  return {{"seq_frb", mk(PresetId::SeqFrb)},
          {"par_up_fadr", mk(PresetId::ParUpFadr)},
          {"par_down_fadr", mk(PresetId::ParDownFadr)},
          {"complete_1", mk(PresetId::Complete, 1)},
          {"complete_2", mk(PresetId::Complete, 2)},
          {"complete_star_1", mk(PresetId::CompleteStar, 1)},
          {"complete_star_2", mk(PresetId::CompleteStar, 2)}};
}

}  // namespace graphsplit
