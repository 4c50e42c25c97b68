#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "graphsplit/numlin.hpp"

namespace graphsplit {

/// Maximal monotone operator with a computable resolvent J_{sigma A}.
class ResolventOperator {
 public:
  struct Zero {};
  struct Ball {
    Vector center;
    double radius;
  };
  // Product of unit simplices over consecutive coordinate blocks.
  struct Simplex {
    std::vector<std::size_t> blocks;
  };
  struct Linear {
    Matrix l;  // monotone: l + l^T is PSD
  };

  static ResolventOperator zero(std::size_t dim);
  static ResolventOperator ball(Vector center, double radius);
  static ResolventOperator simplex(std::vector<std::size_t> blocks);
  static ResolventOperator linear(Matrix l);

  std::size_t dim() const { return dim_; }
  std::string kind() const;
  const auto& data() const { return data_; }

  Vector resolve(double sigma, const Vector& y) const;

 private:
  ResolventOperator(std::size_t dim, std::variant<Zero, Ball, Simplex, Linear> d)
      : dim_(dim), data_(std::move(d)) {}
  std::size_t dim_;
  std::variant<Zero, Ball, Simplex, Linear> data_;
};

/// Single-valued monotone operator, either Lipschitz or cocoercive.
class ForwardOperator {
 public:
  struct Zero {};
  struct Quadratic {
    Matrix q;  // gradient of x^T q x / 2, q symmetric PSD
  };
  // (u, v) -> (Theta^T v, -Theta u); theta is dim(v) x dim(u)
  struct Saddle {
    Matrix theta;
  };

  static ForwardOperator zero(std::size_t dim);
  static ForwardOperator quadratic(Matrix q);
  static ForwardOperator saddle(Matrix theta);

  std::size_t dim() const { return dim_; }
  std::string kind() const;
  double lipschitz() const { return lipschitz_; }
  bool cocoercive() const { return cocoercive_; }
  const auto& data() const { return data_; }

  Vector apply(const Vector& y) const;

 private:
  ForwardOperator(std::size_t dim, double lip, bool coco, std::variant<Zero, Quadratic, Saddle> d)
      : dim_(dim), lipschitz_(lip), cocoercive_(coco), data_(std::move(d)) {}
  std::size_t dim_;
  double lipschitz_;
  bool cocoercive_;
  std::variant<Zero, Quadratic, Saddle> data_;
};

Vector project_ball(const Vector& y, const Vector& center, double radius);
Vector project_simplex(const Vector& y);

enum class Regularity { Cocoercive, Lipschitz };
std::string to_string(Regularity r);
Regularity parse_regularity(const std::string& s);

/// Inclusion 0 in sum_i A_i x + sum_j B_j x over R^d.
struct ProblemInstance {
  std::size_t dim = 0;
  std::vector<ResolventOperator> resolvents;
  std::vector<ForwardOperator> forwards;
  std::string name;
  std::string provenance;
  std::optional<Vector> reference;  // known solution, when available

  void validate() const;
  std::size_t n() const { return resolvents.size(); }
  std::size_t p() const { return forwards.size(); }
  double ell() const;                 // max Lipschitz constant of the B_j
  bool all_cocoercive() const;

  ProblemInstance with_zero_resolvent(std::size_t position) const;
  ProblemInstance with_zero_forward(std::size_t position) const;
};

}  // namespace graphsplit
