#include "doctest.h"

#include <cmath>

#include "graphsplit/error.hpp"
#include "graphsplit/presets.hpp"
#include "graphsplit/scheme.hpp"
#include "support.hpp"

using namespace graphsplit;
using testing_support::max_abs;

namespace {

CoefficientScheme with(const CoefficientScheme& s, const Matrix* m, const Matrix* n, const Matrix* p,
                       const Matrix* r, const Vector* delta) {
  return CoefficientScheme(m ? *m : s.M(), n ? *n : s.N(), p ? *p : s.P(), s.Q(), r ? *r : s.R(),
                           delta ? *delta : s.delta());
}

}  // namespace

TEST_CASE("standard PQR choices satisfy the column and row sum conditions exactly") {
  for (std::size_t n : {3u, 5u, 8u}) {
    for (std::size_t p : {n - 2, n - 1}) {
      for (auto v : {PqrVariant::IdentityShift, PqrVariant::Aggregated}) {
        const Pqr pqr = standard_pqr(v, n, p);
        CHECK((pqr.P.transpose() * Vector::Ones(n) - Vector::Ones(p)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((pqr.R * Vector::Ones(n) - Vector::Ones(p)).cwiseAbs().maxCoeff() == 0.0);
        if (p == n - 2) CHECK((pqr.Q.transpose() * Vector::Ones(n) - Vector::Ones(p)).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
  const Pqr is = standard_pqr(PqrVariant::IdentityShift, 4, 3);
  CHECK(is.P(1, 0) == 1.0);
  CHECK(is.R(2, 2) == 1.0);
}

TEST_CASE("U and K reproduce P^T - R and P^T - Q^T") {
  for (auto id : all_presets()) {
    PresetSpec spec;
    spec.id = id;
    spec.n = 5;
    const Preset pre = make_preset(spec);
    const auto& s = pre.scheme;
    CHECK_MESSAGE((s.U() * s.M().transpose() - (s.P().transpose() - s.R())).norm() < 1e-9, to_string(id));
    if (!s.q_is_zero())
      CHECK((s.K() * s.M().transpose() - (s.P().transpose() - s.Q().transpose())).norm() < 1e-9);
  }
}

TEST_CASE("assumption report flags exactly the corrupted item") {
  PresetSpec spec;
  spec.id = PresetId::Complete;
  spec.n = 4;
  const CoefficientScheme s = make_preset(spec).scheme;
  REQUIRE(check_assumptions(s).all_pass());

  Vector d2 = 2 * s.delta();
  auto rep = check_assumptions(with(s, nullptr, nullptr, nullptr, nullptr, &d2));
  CHECK(rep.failing() == std::vector<std::string>{"n_delta"});

  Matrix p2 = s.P();
  p2.col(0) *= 2;
  rep = check_assumptions(with(s, nullptr, nullptr, &p2, nullptr, nullptr));
  CHECK(rep.failing() == std::vector<std::string>{"p_columns"});

  Matrix r2 = s.R();
  r2.row(1) *= 0.5;
  rep = check_assumptions(with(s, nullptr, nullptr, nullptr, &r2, nullptr));
  CHECK(rep.failing() == std::vector<std::string>{"r_rows"});

  Matrix m2 = 1.5 * s.M();
  rep = check_assumptions(with(s, &m2, nullptr, nullptr, nullptr, nullptr));
  CHECK(rep.failing() == std::vector<std::string>{"psd"});
}

TEST_CASE("doubled N breaks the N/delta balance") {
  PresetSpec spec;
  spec.id = PresetId::SeqFb;
  spec.n = 4;
  const CoefficientScheme s = make_preset(spec).scheme;
  Matrix n2 = 2 * s.N();
  const auto rep = check_assumptions(with(s, nullptr, &n2, nullptr, nullptr, nullptr));
  CHECK_FALSE(rep.item("n_delta").pass);
}

TEST_CASE("explicit structure checks") {
  PresetSpec spec;
  spec.id = PresetId::SeqFb;
  spec.n = 4;
  const CoefficientScheme s = make_preset(spec).scheme;
  CHECK(check_explicit(s).empty());
  Matrix n2 = s.N();
  n2(0, 1) = 0.5;
  const auto v = check_explicit(with(s, nullptr, &n2, nullptr, nullptr, nullptr));
  REQUIRE(v.size() == 1);
  CHECK(v[0].matrix == "N");
  CHECK(v[0].i == 0);
  CHECK(v[0].j == 1);
}

TEST_CASE("parameter ranges") {
  ParameterRanges lip{Regularity::Lipschitz, 2.0, 1.0, 0.5};
  CHECK(lip.lambda_max(0.25) == doctest::Approx(0.5));
  CHECK(lip.gamma_admissible(0.49));
  CHECK_FALSE(lip.gamma_admissible(0.5));

  PresetSpec spec;
  spec.id = PresetId::DavisYin;
  const auto dy = make_preset(spec);
  const double ell = 1.7;
  const auto r = parameter_ranges(dy.scheme, ell, Regularity::Cocoercive);
  REQUIRE_FALSE(r.unbounded());
  // gamma_hat = 2 gamma / w with w = 1 covers (0, 4 / ell)
  CHECK(dy.meta.gamma_scale * *r.gamma_max == doctest::Approx(4.0 / ell));
  for (double gh : {0.5, 1.0, 2.0}) {
    const double gamma = gh / dy.meta.gamma_scale;
    CHECK(dy.meta.lambda_scale * r.lambda_max(gamma) == doctest::Approx(2.0 - gh * ell / 2.0));
  }
  CHECK(r.describe().find("gamma_max") != std::string::npos);

  const auto zero = parameter_ranges(dy.scheme, 0.0, Regularity::Cocoercive);
  CHECK(zero.unbounded());
  CHECK(zero.gamma_admissible(1e9));
  CHECK(zero.lambda_max(5.0) == doctest::Approx(1.0));
}

TEST_CASE("tau requires the matching Q condition") {
  PresetSpec spec;
  spec.id = PresetId::SeqFrb;
  spec.n = 4;
  const auto s = make_preset(spec).scheme;
  CHECK_THROWS_AS(compute_tau(s, Regularity::Cocoercive), Error);
  CHECK(compute_tau(s, Regularity::Lipschitz) == doctest::Approx(2.0));
}

TEST_CASE("star tau in the Lipschitz parallel up case is n / mu^2") {
  for (std::size_t n : {3u, 5u, 10u}) {
    PresetSpec spec;
    spec.id = PresetId::ParUpFadr;
    spec.n = n;
    spec.w = 1.5;
    spec.mu2 = 0.8;
    const auto s = make_preset(spec).scheme;
    CHECK(compute_tau(s, Regularity::Lipschitz) == doctest::Approx(n / 0.8).epsilon(1e-9));
  }
}

TEST_CASE("column-sum PQR gives tau = max 1/s_i^2") {
  Rng rng(21);
  for (auto topo : {Topology::Sequential, Topology::StarFirst, Topology::StarLast, Topology::Complete}) {
    for (std::size_t n : {3u, 6u}) {
      const auto g = build_topology(topo, n, [&](std::size_t, std::size_t) { return rng.uniform(1.0, 2.0); });
      const auto sub = same_edges(g, [&](std::size_t i, std::size_t j) { return g.weight(i, j) * rng.uniform(0.2, 1.0); });
      const Matrix m = incidence(sub);
      const Pqr pqr = standard_pqr(PqrVariant::ColumnSum, n, n - 1, m);
      double expected = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        double si = 0;
        for (std::size_t j = i + 1; j < n; ++j) si += m(j, i);
        expected = std::max(expected, 1.0 / (si * si));
      }
      const auto s = build_from_graphs(sub, pqr.P, pqr.Q, pqr.R);
      const double tau = compute_tau(s, Regularity::Cocoercive);
      // exact for trees; extra dual edges can only shrink the norm
      if (topo == Topology::Complete)
        CHECK(tau <= expected * (1 + 1e-9));
      else
        CHECK(tau == doctest::Approx(expected).epsilon(1e-9));
      const auto rep = check_assumptions(s);
      CHECK(rep.item("p_columns").pass);
      CHECK(rep.item("r_rows").pass);
    }
  }
}

TEST_CASE("variant PSD condition") {
  // same-weight graphs with P != R^T fail for every gamma
  PresetSpec spec;
  spec.id = PresetId::SeqFb;
  spec.n = 4;
  const auto s = make_preset(spec).scheme;
  CHECK_FALSE(check_variant_psd(s, 1e-3, 1.0, Regularity::Cocoercive).pass);
  CHECK_FALSE(check_variant_psd(s, 1.0, 1.0, Regularity::Cocoercive).pass);

  // strictly positive 2D - N - N^T - MM^T on the complement of 1: small gamma passes
  PresetSpec half = spec;
  half.id = PresetId::Complete;
  half.mu2 = 0.5;
  const auto sh = make_preset(half).scheme;
  CHECK(check_variant_psd(sh, 1e-6, 1.0, Regularity::Cocoercive).pass);
}

TEST_CASE("doubled-weight column-sum scheme: variant PSD iff gamma <= 2s/ell") {
  // path G' with mu^2 and G = G' with w = 2 mu^2 so that 2D - N - N^T - MM^T = MM^T
  const std::size_t n = 4;
  std::vector<Edge> ge, se;
  const double mu2[] = {0.7, 1.3, 0.9};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    ge.push_back({i, i + 1, 2 * mu2[i]});
    se.push_back({i, i + 1, mu2[i]});
  }
  const WeightedGraph g(n, ge);
  const SubgraphWeights sub(g, se);
  const Matrix m = incidence(sub);
  const Pqr pqr = standard_pqr(PqrVariant::ColumnSum, n, n - 1, m);
  const auto s = build_from_graphs(sub, pqr.P, pqr.Q, pqr.R);
  double smin = 1e300;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double si = 0;
    for (std::size_t j = i + 1; j < n; ++j) si += m(j, i);
    smin = std::min(smin, si * si);
  }
  const double ell = 1.3;
  const double bound = 2 * smin / ell;
  CHECK(check_variant_psd(s, 0.5 * bound, ell, Regularity::Cocoercive).pass);
  CHECK(check_variant_psd(s, 0.999 * bound, ell, Regularity::Cocoercive).pass);
  CHECK_FALSE(check_variant_psd(s, 1.01 * bound, ell, Regularity::Cocoercive).pass);
}

TEST_CASE("locality audit") {
  for (auto id : {PresetId::SeqFb, PresetId::ParUpFdr, PresetId::ParDownFdr, PresetId::GraphFb}) {
    PresetSpec spec;
    spec.id = id;
    spec.n = 6;
    const auto pre = make_preset(spec);
    const auto rep = locality_audit(pre.scheme, pre.graphs.parent(), &pre.graphs.graph());
    CHECK_MESSAGE(rep.violations.empty(), to_string(id));
  }
  PresetSpec spec;
  spec.id = PresetId::Complete;
  spec.n = 5;
  const auto k = make_preset(spec);
  CHECK(locality_audit(k.scheme, k.graphs.parent()).violations.empty());

  // path 1-2-3 with node 3 reading x_1 through N
  spec.id = PresetId::SeqFb;
  spec.n = 3;
  spec.w1n = 0.0;
  const auto path = make_preset(spec);
  Matrix n = path.scheme.N();
  n(2, 0) = 0.25;
  n(1, 0) -= 0.25;
  const CoefficientScheme bad(path.scheme.M(), n, path.scheme.P(), path.scheme.Q(), path.scheme.R(),
                              path.scheme.delta());
  const auto rep = locality_audit(bad, path.graphs.parent());
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].node == 2);
  CHECK(rep.violations[0].other == 0);
  CHECK(rep.violations[0].kind == "x");
}

TEST_CASE("scheme validation rejects inconsistent shapes") {
  Matrix m(3, 2);
  m << 1, 0, -1, 1, 0, -1;
  CHECK_THROWS_AS(CoefficientScheme(m, Matrix::Zero(3, 3), Matrix::Zero(3, 1), Matrix::Zero(3, 1),
                                    Matrix::Zero(2, 3), Vector::Ones(3)),
                  Error);
  CHECK_THROWS_AS(CoefficientScheme(m, Matrix::Zero(2, 2), Matrix::Zero(3, 1), Matrix::Zero(3, 1),
                                    Matrix::Zero(1, 3), Vector::Ones(3)),
                  Error);
}

TEST_CASE("graph forward-backward falls back to a non-neighbour only when forced") {
  // node 2 has no earlier neighbour, so h(2) = 1 is read without an edge
  const WeightedGraph g(4, {{0, 1, 1.0}, {0, 3, 1.0}, {2, 3, 1.0}});
  PresetSpec spec;
  spec.id = PresetId::GraphFb;
  spec.graphs = same_edges(g, [](std::size_t, std::size_t) { return 1.0; });
  const auto pre = make_preset(spec);
  const auto rep = locality_audit(pre.scheme, g);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].node == 2);
  CHECK(rep.violations[0].other == 1);
}
