#include "doctest.h"

#include "graphsplit/error.hpp"
#include "graphsplit/presets.hpp"
#include "graphsplit/solver.hpp"

using namespace graphsplit;

TEST_CASE("every preset passes the assumption checks and is explicit") {
  for (auto id : all_presets()) {
    for (std::size_t n : {3u, 4u, 7u}) {
      PresetSpec spec;
      spec.id = id;
      spec.n = n;
      const Preset pre = make_preset(spec);
      const auto rep = check_assumptions(pre.scheme);
      CHECK_MESSAGE(rep.all_pass(), to_string(id), " n=", n);
      CHECK(check_explicit(pre.scheme).empty());
      CHECK(parse_preset(to_string(id)) == id);
    }
  }
  CHECK_THROWS_AS(parse_preset("nope"), Error);
}

TEST_CASE("preset parameter validation") {
  PresetSpec spec;
  spec.id = PresetId::SeqFrb;
  spec.n = 2;
  CHECK_THROWS_AS(make_preset(spec), Error);
  spec.id = PresetId::Complete;
  spec.n = 4;
  spec.pqr = 3;
  CHECK_THROWS_AS(make_preset(spec), Error);
  spec.pqr = 1;
  spec.mu2 = 2.0;  // above w
  CHECK_THROWS_AS(make_preset(spec), Error);
}

TEST_CASE("predecessor map prefers the largest adjacent earlier node") {
  WeightedGraph g(5, {{0, 2, 1.0}, {1, 2, 1.0}, {0, 4, 1.0}, {2, 3, 1.0}});
  CHECK(predecessor_in(g, 2) == 1);
  CHECK(predecessor_in(g, 3) == 2);
  CHECK(predecessor_in(g, 4) == 0);
  CHECK(predecessor_in(g, 1) == 0);  // not adjacent to 0: falls back to i - 1
}

TEST_CASE("Davis-Yin preset forward sweep on zero operators") {
  PresetSpec spec;
  spec.id = PresetId::DavisYin;
  const Preset pre = make_preset(spec);
  ProblemInstance p;
  p.dim = 1;
  p.resolvents = {ResolventOperator::zero(1), ResolventOperator::zero(1)};
  p.forwards = {ForwardOperator::zero(1)};
  const Engine eng(pre.scheme, p);
  const double z = 0.7;
  Block zb(1, 1);
  zb.matrix()(0, 0) = z;
  const Block x = eng.sweep(lift_apply(pre.scheme.M(), zb), 1.0);
  CHECK(x.matrix()(0, 0) == doctest::Approx(2 * z));
  CHECK(x.matrix()(1, 0) == doctest::Approx(2 * z));
}

TEST_CASE("oracle sanity") {
  // proximal point when B = 0
  Vector c = Vector::Zero(2);
  const auto ball = ResolventOperator::ball(c, 1.0);
  Vector x0(2), x1(2);
  x0 << 3, 0;
  x1 << 0, 4;
  const auto xs = oracle_frb(ball, ForwardOperator::zero(2), 0.3, 0.0, x0, x1, 3);
  CHECK((xs[0] - project_ball(x1, c, 1.0)).norm() < 1e-15);
  CHECK((xs[1] - xs[0]).norm() < 1e-15);

  // all maps identity: constant after the first step
  Vector z(2);
  z << 1, -2;
  const auto dy = oracle_davis_yin(ResolventOperator::zero(2), ResolventOperator::zero(2), ForwardOperator::zero(2),
                                   1.0, 0.5, z, 4);
  for (std::size_t k = 1; k < dy.size(); ++k) CHECK((dy[k].matrix() - dy[0].matrix()).norm() == 0.0);
}

TEST_CASE("reduction suite matches every oracle") {
  for (std::uint64_t seed : {1u, 7u}) {
    for (const auto& r : reduction_suite(seed)) {
      CHECK_MESSAGE(r.pass, r.name, " deviation ", r.max_deviation);
      CHECK(r.iterations >= 200);
    }
  }
}
