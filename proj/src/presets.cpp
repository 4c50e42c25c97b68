#include "graphsplit/presets.hpp"

#include <cmath>

#include "graphsplit/error.hpp"

namespace graphsplit {

namespace {

const std::vector<std::pair<PresetId, const char*>>& preset_names() {
  static const std::vector<std::pair<PresetId, const char*>> names = {
      {PresetId::GraphFb, "graph_fb"},
      {PresetId::GraphFrb, "graph_frb"},
      {PresetId::SeqFb, "seq_fb"},
      {PresetId::SeqFrb, "seq_frb"},
      {PresetId::ParUpFdr, "par_up_fdr"},
      {PresetId::ParUpFadr, "par_up_fadr"},
      {PresetId::ParDownFdr, "par_down_fdr"},
      {PresetId::ParDownFadr, "par_down_fadr"},
      {PresetId::Complete, "complete"},
      {PresetId::CompleteStar, "complete_star"},
      {PresetId::DavisYin, "davis_yin"},
      {PresetId::FrbClassic, "frb_classic"},
      {PresetId::Ryu, "ryu"},
      {PresetId::ProductSpaceUp, "product_space_up"},
      {PresetId::ProductSpaceDown, "product_space_down"},
  };
  return names;
}

WeightFn constant(double v) {
  return [v](std::size_t, std::size_t) { return v; };
}

Pqr combine(std::size_t n, std::size_t p, PqrVariant pv, std::optional<PqrVariant> qv, PqrVariant rv) {
  Pqr out;
  out.P = standard_pqr(pv, n, p).P;
  out.Q = qv ? standard_pqr(*qv, n, p).Q : Matrix::Zero(n, p);
  out.R = standard_pqr(rv, n, p).R;
  return out;
}

void require_n(const PresetSpec& spec, std::size_t min_n) {
  if (spec.n < min_n)
    fail(ErrorKind::InvalidConfig, to_string(spec.id) + " needs n >= " + std::to_string(min_n) + ", got " +
                                       std::to_string(spec.n));
}

// Ring G (closing weight w1n, omitted when 0) over a sequential G'.
SubgraphWeights ring_over_sequential(std::size_t n, const WeightFn& w, double w1n, const WeightFn& mu2) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w(i, i + 1)});
  if (w1n > 0.0 && n > 2) edges.push_back({0, n - 1, w1n});
  WeightedGraph g(n, std::move(edges));
  return subgraph_of(g, Topology::Sequential, mu2);
}

}  // namespace

PresetId parse_preset(const std::string& name) {
  for (const auto& [id, s] : preset_names())
    if (name == s) return id;
  fail(ErrorKind::InvalidConfig, "unknown preset '" + name + "'");
}

std::string to_string(PresetId id) {
  for (const auto& [pid, s] : preset_names())
    if (pid == id) return s;
  return "?";
}

const std::vector<PresetId>& all_presets() {
  static const std::vector<PresetId> ids = [] {
    std::vector<PresetId> v;
    for (const auto& [id, s] : preset_names()) v.push_back(id);
    return v;
  }();
  return ids;
}

std::size_t predecessor_in(const WeightedGraph& g, std::size_t i) {
  if (i == 0) fail(ErrorKind::InvalidInput, "node 1 has no predecessor");
  for (std::size_t j = i; j-- > 0;)
    if (g.has_edge(i, j)) return j;
  return i - 1;
}

ProblemInstance Preset::adapt(const ProblemInstance& problem) const {
  if (meta.zero_resolvent_at) {
    if (problem.n() + 1 != scheme.n())
      fail(ErrorKind::InvalidConfig, meta.name + " expects " + std::to_string(scheme.n() - 1) +
                                         " resolvent operators, problem has " + std::to_string(problem.n()));
    return problem.with_zero_resolvent(*meta.zero_resolvent_at);
  }
  return problem;
}

Preset make_preset(const PresetSpec& spec) {
  const WeightFn w = spec.w_fn ? spec.w_fn : constant(spec.w);
  const WeightFn mu2 = spec.mu2_fn ? spec.mu2_fn : constant(spec.mu2);
  const auto IS = PqrVariant::IdentityShift;
  const auto AG = PqrVariant::Aggregated;
  const std::size_t n = spec.n;

  Preset out;
  out.meta.name = to_string(spec.id);
  Pqr pqr;
  std::size_t nodes = n;

  auto coco_or_lip = [&](Regularity fallback) {
    return spec.regularity ? *spec.regularity : fallback;
  };

  switch (spec.id) {
    case PresetId::GraphFb:
    case PresetId::GraphFrb: {
      const bool lip = spec.id == PresetId::GraphFrb;
      if (spec.graphs) {
        out.graphs = *spec.graphs;
      } else {
        require_n(spec, lip ? 3 : 2);
        out.graphs = same_edges(build_topology(Topology::Ring, n, w), mu2);
      }
      nodes = out.graphs.n();
      if (nodes < (lip ? 3u : 2u)) fail(ErrorKind::InvalidConfig, out.meta.name + ": graph too small");
      const std::size_t p = lip ? nodes - 2 : nodes - 1;
      pqr = combine(nodes, p, IS, lip ? std::optional(AG) : std::nullopt, IS);
      pqr.R = Matrix::Zero(p, nodes);
      for (std::size_t j = 0; j < p; ++j) pqr.R(j, predecessor_in(out.graphs.parent(), j + 1)) = 1.0;
      out.meta.regularity = lip ? Regularity::Lipschitz : Regularity::Cocoercive;
      out.meta.description = lip ? "graph forward-backward, Lipschitz case" : "graph forward-backward";
      break;
    }
    case PresetId::SeqFb:
    case PresetId::SeqFrb: {
      const bool lip = spec.id == PresetId::SeqFrb;
      require_n(spec, lip ? 3 : 2);
      out.graphs = ring_over_sequential(n, w, spec.w1n, mu2);
      pqr = lip ? combine(n, n - 2, IS, IS, IS) : combine(n, n - 1, IS, std::nullopt, IS);
      out.meta.regularity = lip ? Regularity::Lipschitz : Regularity::Cocoercive;
      out.meta.description =
          lip ? "weighted sequential forward-reflected-backward" : "weighted sequential forward-backward";
      break;
    }
    case PresetId::ParUpFdr:
    case PresetId::ParUpFadr: {
      const bool lip = spec.id == PresetId::ParUpFadr;
      require_n(spec, lip ? 3 : 2);
      out.graphs = same_edges(build_topology(Topology::StarFirst, n, w), mu2);
      pqr = lip ? combine(n, n - 2, IS, AG, AG) : combine(n, n - 1, IS, std::nullopt, AG);
      out.meta.regularity = lip ? Regularity::Lipschitz : Regularity::Cocoercive;
      out.meta.description = lip ? "parallel up forward-aggregated-Douglas-Rachford"
                                 : "parallel up forward-Douglas-Rachford";
      break;
    }
    case PresetId::ParDownFdr:
    case PresetId::ParDownFadr: {
      const bool lip = spec.id == PresetId::ParDownFadr;
      require_n(spec, lip ? 3 : 2);
      out.graphs = same_edges(build_topology(Topology::StarLast, n, w), mu2);
      pqr = lip ? combine(n, n - 2, IS, AG, AG) : combine(n, n - 1, AG, std::nullopt, IS);
      out.meta.regularity = lip ? Regularity::Lipschitz : Regularity::Cocoercive;
      out.meta.description = lip ? "parallel down forward-aggregated-Douglas-Rachford"
                                 : "parallel down forward-Douglas-Rachford";
      break;
    }
    case PresetId::Complete:
    case PresetId::CompleteStar: {
      const auto reg = coco_or_lip(Regularity::Cocoercive);
      const bool lip = reg == Regularity::Lipschitz;
      require_n(spec, lip ? 3 : 2);
      if (spec.pqr != 1 && spec.pqr != 2) fail(ErrorKind::InvalidConfig, "pqr must be 1 or 2");
      const auto g = build_topology(Topology::Complete, n, w);
      out.graphs = spec.id == PresetId::Complete ? same_edges(g, mu2) : subgraph_of(g, Topology::StarLast, mu2);
      const std::size_t p = lip ? n - 2 : n - 1;
      const PqrVariant rq = spec.pqr == 1 ? IS : AG;
      pqr = combine(n, p, IS, lip ? std::optional(rq) : std::nullopt, rq);
      out.meta.regularity = reg;
      out.meta.description = std::string(spec.id == PresetId::Complete ? "complete" : "complete-star") +
                             " graph algorithm " + std::to_string(spec.pqr);
      break;
    }
    case PresetId::DavisYin: {
      nodes = 2;
      const double w12 = w(0, 1), m12 = mu2(0, 1);
      out.graphs = same_edges(build_topology(Topology::Sequential, 2, w12), constant(m12));
      pqr = combine(2, 1, IS, std::nullopt, IS);
      out.meta.regularity = Regularity::Cocoercive;
      out.meta.description = "Davis-Yin";
      out.meta.z_scale = 2.0 * std::sqrt(m12) / w12;
      out.meta.gamma_scale = 2.0 / w12;
      out.meta.lambda_scale = 2.0 * m12 / w12;
      break;
    }
    case PresetId::FrbClassic: {
      nodes = 3;
      std::vector<Edge> edges{{0, 1, w(0, 1)}, {1, 2, w(1, 2)}};
      if (spec.w13 > 0.0) edges.push_back({0, 2, spec.w13});
      out.graphs = subgraph_of(WeightedGraph(3, std::move(edges)), Topology::Sequential, mu2);
      pqr = combine(3, 1, IS, IS, IS);
      out.meta.regularity = Regularity::Lipschitz;
      out.meta.description = "three-node forward-reflected-backward";
      break;
    }
    case PresetId::Ryu: {
      require_n(spec, 3);
      out.graphs = subgraph_of(build_topology(Topology::Complete, n, 2.0), Topology::StarLast, constant(1.0));
      pqr = Pqr{Matrix::Zero(n, 0), Matrix::Zero(n, 0), Matrix::Zero(0, n)};
      out.meta.regularity = Regularity::Cocoercive;
      out.meta.description = "Ryu splitting";
      const double s = 1.0 / static_cast<double>(n - 1);
      out.meta.z_scale = out.meta.gamma_scale = out.meta.lambda_scale = s;
      break;
    }
    case PresetId::ProductSpaceUp:
    case PresetId::ProductSpaceDown: {
      require_n(spec, 1);
      nodes = n + 1;
      const bool up = spec.id == PresetId::ProductSpaceUp;
      out.graphs = same_edges(build_topology(up ? Topology::StarFirst : Topology::StarLast, nodes, 2.0),
                              constant(1.0));
      pqr = up ? combine(nodes, n, IS, std::nullopt, AG) : combine(nodes, n, AG, std::nullopt, IS);
      out.meta.regularity = Regularity::Cocoercive;
      out.meta.zero_resolvent_at = up ? 0 : n;
      out.meta.description = up ? "product-space Davis-Yin, zero operator first"
                                : "product-space Davis-Yin, zero operator last";
      break;
    }
  }
  out.scheme = build_from_graphs(out.graphs, pqr.P, pqr.Q, pqr.R, out.meta.name);
  (void)nodes;
  return out;
}

std::vector<Block> oracle_davis_yin(const ResolventOperator& a1, const ResolventOperator& a2,
                                    const ForwardOperator& b, double gamma_hat, double lambda_hat, Vector zhat,
                                    std::size_t iters) {
  std::vector<Block> out;
  for (std::size_t k = 0; k < iters; ++k) {
    Vector x1 = a1.resolve(gamma_hat, zhat);
    Vector x2 = a2.resolve(gamma_hat, 2.0 * x1 - zhat - gamma_hat * b.apply(x1));
    zhat -= lambda_hat * (x1 - x2);
    Block blk(2, static_cast<std::size_t>(x1.size()));
    blk.row(0) = x1.transpose();
    blk.row(1) = x2.transpose();
    out.push_back(std::move(blk));
  }
  return out;
}

std::vector<Vector> oracle_frb(const ResolventOperator& a, const ForwardOperator& b, double gamma, double w13,
                               Vector x_prev, Vector x_cur, std::size_t iters) {
  std::vector<Vector> out;
  Vector b_prev = b.apply(x_prev);
  for (std::size_t k = 0; k < iters; ++k) {
    Vector b_cur = b.apply(x_cur);
    Vector next = a.resolve(gamma, (1.0 - w13) * x_cur + w13 * x_prev - 2.0 * gamma * b_cur + gamma * b_prev);
    x_prev = std::move(x_cur);
    b_prev = std::move(b_cur);
    x_cur = next;
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<Block> oracle_ryu(const std::vector<ResolventOperator>& a, double gamma_hat, double lambda_hat,
                              Block zhat, std::size_t iters) {
  const std::size_t n = a.size();
  const double c = 2.0 / static_cast<double>(n - 1);
  std::vector<Block> out;
  for (std::size_t k = 0; k < iters; ++k) {
    Block x(n, zhat.dim());
    Vector partial = Vector::Zero(zhat.dim());
    for (std::size_t i = 0; i + 1 < n; ++i) {
      x.row(i) = a[i].resolve(gamma_hat, zhat.row(i).transpose() + c * partial).transpose();
      partial += x.row(i).transpose();
    }
    Vector zsum = zhat.matrix().colwise().sum().transpose();
    x.row(n - 1) = a[n - 1].resolve(gamma_hat, c * partial - zsum).transpose();
    for (std::size_t i = 0; i + 1 < n; ++i) zhat.row(i) -= lambda_hat * (x.row(i) - x.row(n - 1));
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<Block> oracle_product_space_up(const std::vector<ResolventOperator>& a,
                                           const std::vector<ForwardOperator>& b, double gamma, double lambda,
                                           Block z, std::size_t iters) {
  const std::size_t n = a.size();
  std::vector<Block> out;
  for (std::size_t k = 0; k < iters; ++k) {
    Block x(n + 1, z.dim());
    Vector x1 = z.matrix().colwise().sum().transpose() / static_cast<double>(n);
    x.row(0) = x1.transpose();
    const Vector bx1_base = x1;
    for (std::size_t i = 0; i < n; ++i)
      x.row(i + 1) =
          a[i].resolve(gamma, 2.0 * x1 - z.row(i).transpose() - gamma * b[i].apply(bx1_base)).transpose();
    for (std::size_t i = 0; i < n; ++i) z.row(i) -= lambda * (x.row(0) - x.row(i + 1));
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<Block> oracle_product_space_down(const std::vector<ResolventOperator>& a,
                                             const std::vector<ForwardOperator>& b, double gamma, double lambda,
                                             Block z, std::size_t iters) {
  const std::size_t n = a.size();
  const double inv = 1.0 / static_cast<double>(n);
  std::vector<Block> out;
  for (std::size_t k = 0; k < iters; ++k) {
    Block x(n + 1, z.dim());
    Vector xs = Vector::Zero(z.dim()), zs = Vector::Zero(z.dim()), bs = Vector::Zero(z.dim());
    for (std::size_t i = 0; i < n; ++i) {
      x.row(i) = a[i].resolve(gamma, z.row(i).transpose()).transpose();
      xs += x.row(i).transpose();
      zs += z.row(i).transpose();
      bs += b[i].apply(x.row(i).transpose());
    }
    x.row(n) = (2.0 * inv * xs - inv * zs - gamma * inv * bs).transpose();
    for (std::size_t i = 0; i < n; ++i) z.row(i) -= lambda * (x.row(i) - x.row(n));
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace graphsplit
