#include <cmath>

#include "graphsplit/presets.hpp"
#include "graphsplit/solver.hpp"

namespace graphsplit {

namespace {

ResolventOperator random_ball(Rng& rng, std::size_t d) {
  Vector c(d);
  for (std::size_t i = 0; i < d; ++i) c(i) = rng.uniform(-2.0, 2.0);
  return ResolventOperator::ball(c, rng.uniform(0.5, 1.5));
}

ForwardOperator random_quadratic(Rng& rng, std::size_t d) {
  Matrix g = rng.uniform_matrix(d, d, -1.0, 1.0);
  return ForwardOperator::quadratic(g.transpose() * g / static_cast<double>(d));
}

ForwardOperator random_saddle(Rng& rng, std::size_t du) {
  return ForwardOperator::saddle(rng.uniform_matrix(du, du, -1.0, 1.0));
}

Block random_block(Rng& rng, std::size_t rows, std::size_t d) {
  Block b(rows, d);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < d; ++j) b.matrix()(i, j) = rng.normal();
  return b;
}

std::vector<Block> run_scheme(const CoefficientScheme& s, const ProblemInstance& prob, double gamma, double lambda,
                              const Block& z0, std::size_t iters) {
  Engine eng(s, prob);
  SolverState st = eng.initial_state(DualMode::FullZ, z0);
  std::vector<Block> xs;
  for (std::size_t k = 0; k < iters; ++k) {
    eng.step(st, gamma, lambda);
    xs.push_back(st.x);
  }
  return xs;
}

double max_dev(const std::vector<Block>& a, const std::vector<Block>& b) {
  double dev = 0.0;
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k)
    dev = std::max(dev, (a[k].matrix() - b[k].matrix()).cwiseAbs().maxCoeff());
  if (a.size() != b.size()) dev = INFINITY;
  return dev;
}

ProblemInstance make_problem(std::size_t d, std::vector<ResolventOperator> a, std::vector<ForwardOperator> b) {
  ProblemInstance p;
  p.dim = d;
  p.resolvents = std::move(a);
  p.forwards = std::move(b);
  p.name = "reduction";
  return p;
}

}  // namespace

std::vector<ReductionResult> reduction_suite(std::uint64_t seed, std::size_t iters, double tol) {
  std::vector<ReductionResult> out;
  Rng root(seed);
  std::uint64_t stream = 0;

  auto finish = [&](std::string name, double dev, std::string matching) {
    out.push_back({std::move(name), iters, dev, tol, dev <= tol, std::move(matching)});
  };

  // Davis-Yin with general weights
  {
    Rng rng = root.substream(stream++);
    const std::size_t d = 5;
    PresetSpec spec;
    spec.id = PresetId::DavisYin;
    spec.w = rng.uniform(0.5, 3.0);
    spec.mu2 = spec.w * rng.uniform(0.2, 1.0);
    const Preset pre = make_preset(spec);
    auto prob = make_problem(d, {random_ball(rng, d), random_ball(rng, d)}, {random_quadratic(rng, d)});
    const double gamma = 0.4, lambda = 0.6;
    const Block z0 = random_block(rng, 1, d);
    auto xs = run_scheme(pre.scheme, prob, gamma, lambda, z0, iters);
    auto os = oracle_davis_yin(prob.resolvents[0], prob.resolvents[1], prob.forwards[0], pre.meta.gamma_scale * gamma,
                               pre.meta.lambda_scale * lambda, pre.meta.z_scale * z0.row(0).transpose(), iters);
    finish("davis_yin", max_dev(xs, os), "x_i = x_i; zhat = (2/w12) mu12 z");
  }

  // Forward-reflected-backward from the three-node scheme with A1 = A3 = 0
  for (double w13 : {0.0, 0.4}) {
    Rng rng = root.substream(stream++);
    const std::size_t du = 3, d = 2 * du;
    PresetSpec spec;
    spec.id = PresetId::FrbClassic;
    spec.w13 = w13;
    const Preset pre = make_preset(spec);
    auto a2 = random_ball(rng, d);
    auto prob = make_problem(d, {ResolventOperator::zero(d), a2, ResolventOperator::zero(d)}, {random_saddle(rng, du)});
    const double gamma = 0.2, lambda = (1.0 + w13) / 2.0;
    const Block z0 = random_block(rng, 2, d);
    auto xs = run_scheme(pre.scheme, prob, gamma, lambda, z0, iters + 2);
    auto os = oracle_frb(a2, prob.forwards[0], gamma, w13, xs[0].row(1).transpose(), xs[1].row(1).transpose(), iters);
    double dev = 0.0;
    for (std::size_t k = 0; k < iters; ++k) {
      dev = std::max(dev, (xs[k + 2].row(1).transpose() - os[k]).cwiseAbs().maxCoeff());
      dev = std::max(dev, (xs[k + 2].row(0) - xs[k + 1].row(1)).cwiseAbs().maxCoeff());
    }
    finish(w13 == 0.0 ? "frb_classic" : "frb_w13", dev, "oracle x^k = x_2^k for k >= 2; x_1^k = x_2^(k-1)");
  }

  for (std::size_t n : {3u, 4u, 5u}) {
    Rng rng = root.substream(stream++);
    const std::size_t d = 4;
    PresetSpec spec;
    spec.id = PresetId::Ryu;
    spec.n = n;
    const Preset pre = make_preset(spec);
    std::vector<ResolventOperator> a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(random_ball(rng, d));
    auto prob = make_problem(d, a, {});
    const double gamma = 1.3, lambda = 0.8;
    const Block z0 = random_block(rng, n - 1, d);
    auto xs = run_scheme(pre.scheme, prob, gamma, lambda, z0, iters);
    Block zh(Matrix(pre.meta.z_scale * z0.matrix()));
    auto os = oracle_ryu(a, pre.meta.gamma_scale * gamma, pre.meta.lambda_scale * lambda, zh, iters);
    finish("ryu_n" + std::to_string(n), max_dev(xs, os), "x_i = x_i; zhat = z/(n-1)");
  }

  for (bool up : {true, false})
    for (std::size_t n : {1u, 3u}) {
      Rng rng = root.substream(stream++);
      const std::size_t d = 6;
      PresetSpec spec;
      spec.id = up ? PresetId::ProductSpaceUp : PresetId::ProductSpaceDown;
      spec.n = n;
      const Preset pre = make_preset(spec);
      std::vector<ResolventOperator> a;
      std::vector<ForwardOperator> b;
      for (std::size_t i = 0; i < n; ++i) {
        a.push_back(random_ball(rng, d));
        b.push_back(random_quadratic(rng, d));
      }
      auto prob = pre.adapt(make_problem(d, a, b));
      const double gamma = 0.5, lambda = 0.7;
      const Block z0 = random_block(rng, n, d);
      auto xs = run_scheme(pre.scheme, prob, gamma, lambda, z0, iters);
      auto os = up ? oracle_product_space_up(a, b, gamma, lambda, z0, iters)
                   : oracle_product_space_down(a, b, gamma, lambda, z0, iters);
      finish(std::string(up ? "product_space_up" : "product_space_down") + "_n" + std::to_string(n),
             max_dev(xs, os), "identical variables");
    }
  return out;
}

}  // namespace graphsplit
