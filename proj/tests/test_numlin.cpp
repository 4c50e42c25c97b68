#include "doctest.h"

#include "graphsplit/error.hpp"
#include "graphsplit/numlin.hpp"

using namespace graphsplit;

TEST_CASE("pseudoinverse satisfies the Penrose conditions") {
  Rng rng(3);
  Matrix a = rng.uniform_matrix(5, 3, -1, 1) * rng.uniform_matrix(3, 4, -1, 1);  // rank 3
  Matrix ap = pseudoinverse(a);
  CHECK((a * ap * a - a).norm() < 1e-12);
  CHECK((ap * a * ap - ap).norm() < 1e-12);
  CHECK(((a * ap).transpose() - a * ap).norm() < 1e-12);
  CHECK(((ap * a).transpose() - ap * a).norm() < 1e-12);
  CHECK(numerical_rank(a) == 3);
}

TEST_CASE("spectral norm and eigenvalue helpers") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, -2, 1;
  CHECK(spectral_norm(d) == doctest::Approx(3.0));
  CHECK(min_eigenvalue(d) == doctest::Approx(-2.0));
  CHECK(max_eigenvalue(d) == doctest::Approx(3.0));
  CHECK_FALSE(is_psd(d, 1e-9));
  CHECK(is_psd(d.cwiseAbs(), 1e-9));
  CHECK(spectral_norm(Matrix::Zero(0, 0)) == 0.0);
}

TEST_CASE("kernel of a path incidence transpose is the ones vector") {
  Matrix mt(2, 3);
  mt << 1, -1, 0, 0, 1, -1;
  auto rep = kernel_is_span_ones(mt, 1e-9);
  CHECK(rep.is_span_ones);
  CHECK(rep.kernel_dim == 1);
  Matrix bad(1, 3);
  bad << 1, -1, 0;
  CHECK_FALSE(kernel_is_span_ones(bad, 1e-9).is_span_ones);
}

TEST_CASE("lifted application acts row-wise") {
  Matrix a(2, 2);
  a << 1, 2, 0, -1;
  Block b(2, 3);
  b.matrix() << 1, 1, 1, 2, 0, -1;
  Block c = lift_apply(a, b);
  CHECK(c.matrix()(0, 0) == 5);
  CHECK(c.matrix()(0, 2) == -1);
  CHECK(c.matrix()(1, 1) == 0);
}

TEST_CASE("random streams are reproducible and independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  Rng s0 = Rng(42).substream(0), s1 = Rng(42).substream(1), s0b = Rng(42).substream(0);
  const double u0 = s0.uniform();
  CHECK(u0 == s0b.uniform());
  CHECK(u0 != s1.uniform());
  Rng u(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform(-2, 3);
    CHECK((x >= -2 && x < 3));
  }
}

TEST_CASE("finiteness and shape guards") {
  Matrix m = Matrix::Ones(2, 2);
  CHECK_NOTHROW(require_finite(m, "m"));
  m(1, 1) = std::nan("");
  CHECK_THROWS_AS(require_finite(m, "m"), Error);
  CHECK_THROWS_AS(require_shape(m, 3, 2, "m"), Error);
}
