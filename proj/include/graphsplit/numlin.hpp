#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

namespace graphsplit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kRankTol = 1e-12;

/// Stack of `count` vectors in R^dim, one per row.
class Block {
 public:
  Block() = default;
  Block(std::size_t count, std::size_t dim) : data_(Matrix::Zero(count, dim)) {}
  explicit Block(Matrix rows) : data_(std::move(rows)) {}

  std::size_t count() const { return static_cast<std::size_t>(data_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(data_.cols()); }

  auto row(std::size_t i) { return data_.row(static_cast<Eigen::Index>(i)); }
  auto row(std::size_t i) const { return data_.row(static_cast<Eigen::Index>(i)); }

  const Matrix& matrix() const { return data_; }
  Matrix& matrix() { return data_; }

  double frobenius() const { return data_.norm(); }
  bool all_finite() const { return data_.allFinite(); }

 private:
  Matrix data_;
};

/// Applies the lifted operator A ⊗ Id to a block: result row i = sum_j A_ij b_j.
Block lift_apply(const Matrix& a, const Block& b);

Matrix pseudoinverse(const Matrix& a, double rank_tol = kRankTol);
std::size_t numerical_rank(const Matrix& a, double rank_tol = kRankTol);
double spectral_norm(const Matrix& a);

// Eigen tests always run on the symmetric part.
double min_eigenvalue(const Matrix& s);
double max_eigenvalue(const Matrix& s);
bool is_psd(const Matrix& s, double tol);

struct KernelReport {
  bool is_span_ones = false;
  std::size_t kernel_dim = 0;
  double ones_residual = 0.0;  // ||A 1||
};

/// Checks ker(a) == span{1} for an (m x n) matrix a.
KernelReport kernel_is_span_ones(const Matrix& a, double tol);

void require_finite(const Matrix& a, const std::string& name);
void require_shape(const Matrix& a, std::size_t rows, std::size_t cols,
                   const std::string& name);

// mt19937_64 with one derived substream per array draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Independent generator for the given stream index.
  Rng substream(std::uint64_t stream) const;
  double uniform(double lo = 0.0, double hi = 1.0);
  double normal();
  std::uint64_t next();
  Matrix uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_;
};

}  // namespace graphsplit
