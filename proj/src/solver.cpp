#include "graphsplit/solver.hpp"

#include <chrono>
#include <cmath>

#include "graphsplit/error.hpp"

namespace graphsplit {

DualMode parse_dual_mode(const std::string& s) {
  if (s == "full_z" || s == "full") return DualMode::FullZ;
  if (s == "reduced_v" || s == "reduced") return DualMode::ReducedV;
  fail(ErrorKind::InvalidConfig, "mode must be 'full_z' or 'reduced_v', got '" + s + "'");
}

std::string to_string(DualMode m) { return m == DualMode::FullZ ? "full_z" : "reduced_v"; }

double SolverConfig::lambda_at(std::size_t k) const {
  if (lambda_schedule.empty()) return lambda;
  return lambda_schedule[std::min(k, lambda_schedule.size() - 1)];
}

Engine::Engine(const CoefficientScheme& scheme, const ProblemInstance& problem)
    : scheme_(&scheme), problem_(&problem) {
  problem.validate();
  const auto n = scheme.n(), p = scheme.p();
  if (problem.n() != n)
    fail(ErrorKind::InvalidConfig, "scheme has " + std::to_string(n) + " nodes but problem has " +
                                       std::to_string(problem.n()) + " resolvent operators");
  if (problem.p() != p)
    fail(ErrorKind::InvalidConfig, "scheme has p = " + std::to_string(p) + " but problem has " +
                                       std::to_string(problem.p()) + " forward operators");
  const auto ex = check_explicit(scheme);
  if (!ex.empty())
    fail(ErrorKind::UnsupportedScheme, "scheme is not explicit: " + ex.front().reason + " at " + ex.front().matrix +
                                           "(" + std::to_string(ex.front().i + 1) + "," +
                                           std::to_string(ex.front().j + 1) + ")");
  const Matrix pq = scheme.P() - scheme.Q();
  n_terms_.resize(n);
  pq_terms_.resize(n);
  q_terms_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (scheme.N()(i, j) != 0.0) n_terms_[i].push_back({j, scheme.N()(i, j)});
    for (std::size_t j = 0; j < p; ++j) {
      if (pq(i, j) != 0.0) pq_terms_[i].push_back({j, pq(i, j)});
      if (scheme.Q()(i, j) != 0.0) q_terms_[i].push_back({j, scheme.Q()(i, j)});
    }
  }
  r_rows_.resize(p);
  p_cols_.resize(p);
  same_arg_.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      if (scheme.R()(j, l) != 0.0) r_rows_[j].push_back({l, scheme.R()(j, l)});
      if (scheme.P()(l, j) != 0.0) p_cols_[j].push_back({l, scheme.P()(l, j)});
    }
    same_arg_[j] = (scheme.R().row(j).transpose() - scheme.P().col(j)).cwiseAbs().maxCoeff() == 0.0;
  }
  mmt_ = scheme.M() * scheme.M().transpose();
}

Block Engine::sweep(const Block& y, double gamma, Block* forward_r, Block* forward_p) const {
  const auto& s = *scheme_;
  const auto n = s.n(), p = s.p(), d = problem_->dim;
  if (y.count() != n || y.dim() != d) fail(ErrorKind::InvalidInput, "sweep input block has the wrong shape");
  Block x(n, d);
  Block fr(p, d), fp(p, d);
  std::vector<char> have_r(p, 0), have_p(p, 0);

  auto eval_r = [&](std::size_t j) -> Vector {
    if (!have_r[j]) {
      Vector arg = Vector::Zero(d);
      for (const auto& t : r_rows_[j]) arg += t.c * x.row(t.j).transpose();
      fr.row(j) = problem_->forwards[j].apply(arg).transpose();
      have_r[j] = 1;
      if (same_arg_[j]) {
        fp.row(j) = fr.row(j);
        have_p[j] = 1;
      }
    }
    return fr.row(j).transpose();
  };
  auto eval_p = [&](std::size_t j) -> Vector {
    if (!have_p[j]) {
      Vector arg = Vector::Zero(d);
      for (const auto& t : p_cols_[j]) arg += t.c * x.row(t.j).transpose();
      fp.row(j) = problem_->forwards[j].apply(arg).transpose();
      have_p[j] = 1;
      if (same_arg_[j]) {
        fr.row(j) = fp.row(j);
        have_r[j] = 1;
      }
    }
    return fp.row(j).transpose();
  };

  Vector acc(d);
  for (std::size_t i = 0; i < n; ++i) {
    acc = y.row(i).transpose();
    for (const auto& t : n_terms_[i]) acc += t.c * x.row(t.j).transpose();
    for (const auto& t : pq_terms_[i]) acc -= gamma * t.c * eval_r(t.j);
    for (const auto& t : q_terms_[i]) acc -= gamma * t.c * eval_p(t.j);
    const double di = s.delta()(static_cast<Eigen::Index>(i));
    x.row(i) = problem_->resolvents[i].resolve(gamma / di, acc / di).transpose();
  }
  if (forward_r) *forward_r = std::move(fr);
  if (forward_p) *forward_p = std::move(fp);
  return x;
}

Block Engine::dual_image(const SolverState& st) const {
  return st.mode == DualMode::FullZ ? lift_apply(scheme_->M(), st.dual) : st.dual;
}

SolverState Engine::initial_state(DualMode mode, const std::optional<Block>& dual0) const {
  SolverState st;
  st.mode = mode;
  const auto d = problem_->dim;
  const auto rows = mode == DualMode::FullZ ? scheme_->m() : scheme_->n();
  if (dual0) {
    if (dual0->count() != rows || dual0->dim() != d)
      fail(ErrorKind::InvalidInput, "initial dual block must be " + std::to_string(rows) + "x" + std::to_string(d));
    if (!dual0->all_finite()) fail(ErrorKind::InvalidInput, "initial dual block has non-finite entries");
    st.dual = *dual0;
  } else {
    st.dual = Block(rows, d);
  }
  return st;
}

void Engine::step(SolverState& st, double gamma, double lambda) const {
  st.x = sweep(dual_image(st), gamma, &st.forward_r, &st.forward_p);
  if (!st.x.all_finite())
    fail(ErrorKind::Divergence, "non-finite primal iterate at k = " + std::to_string(st.k));
  if (st.mode == DualMode::FullZ) {
    const Matrix inc = scheme_->M().transpose() * st.x.matrix();
    st.mtx_norm = inc.norm();
    st.dual.matrix().noalias() -= lambda * inc;
  } else {
    // ||M^T x||^2 = <x, M M^T x>
    st.mtx_norm = (scheme_->M().transpose() * st.x.matrix()).norm();
    st.dual.matrix().noalias() -= lambda * (mmt_ * st.x.matrix());
  }
  if (!st.dual.all_finite()) fail(ErrorKind::Divergence, "non-finite dual iterate at k = " + std::to_string(st.k));
  ++st.k;
}

double Engine::residual(const Block& x) const {
  const double r = (scheme_->M().transpose() * x.matrix()).norm();
  return r / std::max(1.0, x.frobenius());
}

double Engine::residual(const SolverState& st) const { return st.mtx_norm / std::max(1.0, st.x.frobenius()); }

double consensus_gap(const Block& x) {
  const Vector mean = x.matrix().colwise().mean().transpose();
  double g = 0.0;
  for (std::size_t i = 0; i < x.count(); ++i) g = std::max(g, (x.row(i).transpose() - mean).norm());
  return g;
}

double relative_error(const Block& x, const Vector& reference) {
  const double scale = reference.norm();
  if (!(scale > 0.0)) fail(ErrorKind::InvalidInput, "relative error needs a nonzero reference");
  double e = 0.0;
  for (std::size_t i = 0; i < x.count(); ++i) e = std::max(e, (x.row(i).transpose() - reference).norm());
  return e / scale;
}

SolveResult solve(const CoefficientScheme& scheme, const ProblemInstance& problem, const SolverConfig& config,
                  const Observer& observer) {
  Engine engine(scheme, problem);
  const auto reg = config.regularity;
  if (reg == Regularity::Cocoercive && !problem.all_cocoercive())
    fail(ErrorKind::InvalidConfig, "cocoercive mode needs cocoercive forward operators");
  SolveResult res;
  res.ranges = parameter_ranges(scheme, problem.ell(), reg);
  if (config.record_every == 0) fail(ErrorKind::InvalidConfig, "record_every must be positive");
  if (config.validate_ranges) {
    if (!res.ranges.gamma_admissible(config.gamma))
      fail(ErrorKind::InvalidConfig, "gamma = " + std::to_string(config.gamma) + " outside admissible range: " +
                                         res.ranges.describe());
    const std::size_t checks = config.lambda_schedule.empty() ? 1 : config.lambda_schedule.size();
    for (std::size_t k = 0; k < checks; ++k)
      if (!res.ranges.lambda_admissible(config.gamma, config.lambda_at(k)))
        fail(ErrorKind::InvalidConfig, "lambda = " + std::to_string(config.lambda_at(k)) +
                                           " outside admissible range (0, " +
                                           std::to_string(res.ranges.lambda_max(config.gamma)) + "]");
  }
  const std::optional<Vector>& ref = config.reference ? config.reference : problem.reference;

  SolverState st = engine.initial_state(config.mode, config.initial_dual);
  Matrix x_sum = Matrix::Zero(scheme.n(), problem.dim);
  const auto t0 = std::chrono::steady_clock::now();

  for (std::size_t k = 0; k < config.max_iters; ++k) {
    const double lambda = config.lambda_at(k);
    engine.step(st, config.gamma, lambda);
    x_sum.noalias() += st.x.matrix();
    if (observer) observer(st);

    const double r = engine.residual(st);
    std::optional<double> err;
    if (ref) err = relative_error(st.x, *ref);
    bool stop = false;
    if (config.residual_tol > 0.0 && r <= config.residual_tol) stop = true;
    if (config.error_tol && err && *err <= *config.error_tol) stop = true;
    const bool last = stop || k + 1 == config.max_iters;
    if (k % config.record_every == 0 || last) {
      TraceRow row;
      row.k = k;
      row.residual = r;
      row.consensus_gap = consensus_gap(st.x);
      row.relative_error = err;
      row.ergodic_residual =
          (scheme.M().transpose() * x_sum).norm() / static_cast<double>(k + 1);
      if (config.timing)
        row.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      res.trace.push_back(row);
    }
    res.iterations = k + 1;
    if (stop) {
      res.converged = true;
      break;
    }
  }
  if (res.iterations > 0) res.consensus = st.x.matrix().colwise().mean().transpose();
  res.state = std::move(st);
  return res;
}

Block dual_from_solution(const CoefficientScheme& scheme, const ProblemInstance& problem, double gamma,
                         const Vector& x_star, const Block& v) {
  const auto n = scheme.n(), p = scheme.p(), d = problem.dim;
  if (static_cast<std::size_t>(x_star.size()) != d || v.count() != n || v.dim() != d)
    fail(ErrorKind::InvalidInput, "dual_from_solution: shape mismatch");
  Matrix bx(p, d);
  for (std::size_t j = 0; j < p; ++j) bx.row(j) = problem.forwards[j].apply(x_star).transpose();
  const Vector nsum = scheme.N().rowwise().sum();
  Matrix rhs(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const double di = scheme.delta()(i);
    const Vector yi = x_star + (gamma / di) * v.row(i).transpose();
    rhs.row(i) = (di * yi - nsum(i) * x_star).transpose();
  }
  if (p > 0) rhs += gamma * scheme.P() * bx;
  return Block(Matrix(pseudoinverse(scheme.M()) * rhs));
}

}  // namespace graphsplit

namespace graphsplit {

ErgodicFit ergodic_residual_curve(const std::vector<TraceRow>& trace) {
  if (trace.size() < 100) fail(ErrorKind::InvalidInput, "ergodic fit needs at least 100 trace rows");
  ErgodicFit fit;
  const std::size_t start = trace.size() / 2;
  bool all_zero = true;
  for (std::size_t t = start; t < trace.size(); ++t) all_zero = all_zero && trace[t].ergodic_residual == 0.0;
  if (all_zero) {
    fit.exact_convergence = true;
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (std::size_t t = start; t < trace.size(); ++t) {
    if (trace[t].ergodic_residual <= 0.0) continue;
    const double lx = std::log(static_cast<double>(trace[t].k + 1));
    const double ly = std::log(trace[t].ergodic_residual);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    cnt += 1;
  }
  const double den = cnt * sxx - sx * sx;
  fit.slope = den > 0.0 ? (cnt * sxy - sx * sy) / den : 0.0;
  fit.flat = std::abs(fit.slope) < 0.05;
  return fit;
}

}  // namespace graphsplit
