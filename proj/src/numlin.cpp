#include "graphsplit/numlin.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "graphsplit/error.hpp"

namespace graphsplit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::UnsupportedScheme: return "unsupported-scheme";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

Block lift_apply(const Matrix& a, const Block& b) {
  if (static_cast<std::size_t>(a.cols()) != b.count())
    fail(ErrorKind::InvalidInput, "lift_apply: matrix has " + std::to_string(a.cols()) +
                                      " columns but block has " + std::to_string(b.count()) +
                                      " rows");
  return Block(Matrix(a * b.matrix()));
}

namespace {

Eigen::JacobiSVD<Matrix> svd_of(const Matrix& a, bool vectors) {
  require_finite(a, "matrix");
  if (vectors) return Eigen::JacobiSVD<Matrix>(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return Eigen::JacobiSVD<Matrix>(a);
}

}  // namespace

Matrix pseudoinverse(const Matrix& a, double rank_tol) {
  if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
  auto svd = svd_of(a, true);
  const Vector& s = svd.singularValues();
  const double cutoff = rank_tol * (s.size() ? s(0) : 0.0);
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

std::size_t numerical_rank(const Matrix& a, double rank_tol) {
  if (a.size() == 0) return 0;
  auto svd = svd_of(a, false);
  const Vector& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * s(0)) ++r;
  return r;
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return svd_of(a, false).singularValues()(0);
}

namespace {

Vector sym_eigenvalues(const Matrix& s) {
  require_finite(s, "matrix");
  if (s.rows() != s.cols()) fail(ErrorKind::InvalidInput, "eigenvalues of a non-square matrix");
  Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

double min_eigenvalue(const Matrix& s) {
  if (s.size() == 0) return 0.0;
  return sym_eigenvalues(s).minCoeff();
}

double max_eigenvalue(const Matrix& s) {
  if (s.size() == 0) return 0.0;
  return sym_eigenvalues(s).maxCoeff();
}

bool is_psd(const Matrix& s, double tol) { return min_eigenvalue(s) >= -tol; }

KernelReport kernel_is_span_ones(const Matrix& a, double tol) {
  KernelReport r;
  const auto n = static_cast<std::size_t>(a.cols());
  r.kernel_dim = n - numerical_rank(a);
  r.ones_residual = (a * Vector::Ones(a.cols())).norm();
  const double scale = std::max(1.0, a.norm()) * std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1)));
  r.is_span_ones = r.kernel_dim == 1 && r.ones_residual <= tol * scale;
  return r;
}

void require_finite(const Matrix& a, const std::string& name) {
  if (!a.allFinite()) fail(ErrorKind::InvalidInput, name + " has non-finite entries");
}

void require_shape(const Matrix& a, std::size_t rows, std::size_t cols, const std::string& name) {
  if (static_cast<std::size_t>(a.rows()) != rows || static_cast<std::size_t>(a.cols()) != cols)
    fail(ErrorKind::InvalidInput, name + " must be " + std::to_string(rows) + "x" +
                                      std::to_string(cols) + ", got " + std::to_string(a.rows()) +
                                      "x" + std::to_string(a.cols()));
}

namespace {

// splitmix64 finalizer, used only to derive substream seeds
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

Rng Rng::substream(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 1))); }

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Rng::normal() { return gauss_(engine_); }

Matrix Rng::uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform(lo, hi);
  return m;
}

}  // namespace graphsplit
