#include "graphsplit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphsplit/error.hpp"

namespace graphsplit {

namespace {

void check_dim(const Vector& y, std::size_t dim, const char* who) {
  if (static_cast<std::size_t>(y.size()) != dim)
    fail(ErrorKind::InvalidInput, std::string(who) + ": expected dimension " + std::to_string(dim) +
                                      ", got " + std::to_string(y.size()));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Vector project_ball(const Vector& y, const Vector& center, double radius) {
  Vector diff = y - center;
  const double nrm = diff.norm();
  if (nrm <= radius) return y;
  return center + (radius / nrm) * diff;
}

Vector project_simplex(const Vector& y) {
  const auto n = y.size();
  std::vector<double> s(y.data(), y.data() + n);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cum += s[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (s[k] - t > 0.0) theta = t;
  }
  return (y.array() - theta).max(0.0).matrix();
}

ResolventOperator ResolventOperator::zero(std::size_t dim) { return {dim, Zero{}}; }

ResolventOperator ResolventOperator::ball(Vector center, double radius) {
  require_finite(center, "ball center");
  if (!std::isfinite(radius) || radius <= 0.0) fail(ErrorKind::InvalidInput, "ball radius must be positive");
  const auto d = static_cast<std::size_t>(center.size());
  return {d, Ball{std::move(center), radius}};
}

ResolventOperator ResolventOperator::simplex(std::vector<std::size_t> blocks) {
  if (blocks.empty()) fail(ErrorKind::InvalidInput, "simplex needs at least one block");
  for (auto b : blocks)
    if (b == 0) fail(ErrorKind::InvalidInput, "simplex block of size 0");
  const auto d = std::accumulate(blocks.begin(), blocks.end(), std::size_t{0});
  return {d, Simplex{std::move(blocks)}};
}

ResolventOperator ResolventOperator::linear(Matrix l) {
  require_finite(l, "linear operator");
  if (l.rows() != l.cols()) fail(ErrorKind::InvalidInput, "linear operator must be square");
  if (min_eigenvalue(l) < -1e-10) fail(ErrorKind::InvalidInput, "linear operator is not monotone");
  const auto d = static_cast<std::size_t>(l.rows());
  return {d, Linear{std::move(l)}};
}

std::string ResolventOperator::kind() const {
  return std::visit(overloaded{[](const Zero&) { return std::string("zero"); },
                               [](const Ball&) { return std::string("normal_cone_ball"); },
                               [](const Simplex&) { return std::string("normal_cone_simplex"); },
                               [](const Linear&) { return std::string("linear_monotone"); }},
                    data_);
}

Vector ResolventOperator::resolve(double sigma, const Vector& y) const {
  check_dim(y, dim_, "resolve");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorKind::InvalidInput, "resolvent step must be positive");
  return std::visit(
      overloaded{[&](const Zero&) -> Vector { return y; },
                 [&](const Ball& b) -> Vector { return project_ball(y, b.center, b.radius); },
                 [&](const Simplex& s) -> Vector {
                   Vector out(y.size());
                   Eigen::Index off = 0;
                   for (auto len : s.blocks) {
                     const auto l = static_cast<Eigen::Index>(len);
                     out.segment(off, l) = project_simplex(y.segment(off, l));
                     off += l;
                   }
                   return out;
                 },
                 [&](const Linear& op) -> Vector {
                   Matrix a = Matrix::Identity(op.l.rows(), op.l.cols()) + sigma * op.l;
                   return a.partialPivLu().solve(y);
                 }},
      data_);
}

ForwardOperator ForwardOperator::zero(std::size_t dim) { return {dim, 0.0, true, Zero{}}; }

ForwardOperator ForwardOperator::quadratic(Matrix q) {
  require_finite(q, "quadratic matrix");
  if (q.rows() != q.cols()) fail(ErrorKind::InvalidInput, "quadratic matrix must be square");
  if ((q - q.transpose()).norm() > 1e-10 * std::max(1.0, q.norm()))
    fail(ErrorKind::InvalidInput, "quadratic matrix must be symmetric");
  if (min_eigenvalue(q) < -1e-10 * std::max(1.0, q.norm()))
    fail(ErrorKind::InvalidInput, "quadratic matrix must be PSD");
  const double lip = spectral_norm(q);
  const auto d = static_cast<std::size_t>(q.rows());
  return {d, lip, true, Quadratic{std::move(q)}};
}

ForwardOperator ForwardOperator::saddle(Matrix theta) {
  require_finite(theta, "saddle matrix");
  const double lip = spectral_norm(theta);
  const auto d = static_cast<std::size_t>(theta.rows() + theta.cols());
  return {d, lip, false, Saddle{std::move(theta)}};
}

std::string ForwardOperator::kind() const {
  return std::visit(overloaded{[](const Zero&) { return std::string("zero"); },
                               [](const Quadratic&) { return std::string("quadratic_gradient"); },
                               [](const Saddle&) { return std::string("bilinear_saddle"); }},
                    data_);
}

Vector ForwardOperator::apply(const Vector& y) const {
  check_dim(y, dim_, "forward apply");
  return std::visit(overloaded{[&](const Zero&) -> Vector { return Vector::Zero(y.size()); },
                               [&](const Quadratic& q) -> Vector { return q.q * y; },
                               [&](const Saddle& s) -> Vector {
                                 const auto du = s.theta.cols(), dv = s.theta.rows();
                                 Vector out(y.size());
                                 out.head(du) = s.theta.transpose() * y.tail(dv);
                                 out.tail(dv) = -s.theta * y.head(du);
                                 return out;
                               }},
                    data_);
}

std::string to_string(Regularity r) { return r == Regularity::Cocoercive ? "cocoercive" : "lipschitz"; }

Regularity parse_regularity(const std::string& s) {
  if (s == "cocoercive") return Regularity::Cocoercive;
  if (s == "lipschitz") return Regularity::Lipschitz;
  fail(ErrorKind::InvalidConfig, "regularity must be 'cocoercive' or 'lipschitz', got '" + s + "'");
}

void ProblemInstance::validate() const {
  if (dim == 0) fail(ErrorKind::InvalidInput, "problem dimension must be positive");
  if (resolvents.size() < 2) fail(ErrorKind::InvalidInput, "problem needs at least two resolvent operators");
  for (std::size_t i = 0; i < resolvents.size(); ++i)
    if (resolvents[i].dim() != dim)
      fail(ErrorKind::InvalidInput, "resolvent operator " + std::to_string(i + 1) + " has wrong dimension");
  for (std::size_t j = 0; j < forwards.size(); ++j)
    if (forwards[j].dim() != dim)
      fail(ErrorKind::InvalidInput, "forward operator " + std::to_string(j + 1) + " has wrong dimension");
  if (reference && static_cast<std::size_t>(reference->size()) != dim)
    fail(ErrorKind::InvalidInput, "reference solution has wrong dimension");
}

double ProblemInstance::ell() const {
  double l = 0.0;
  for (const auto& b : forwards) l = std::max(l, b.lipschitz());
  return l;
}

bool ProblemInstance::all_cocoercive() const {
  return std::all_of(forwards.begin(), forwards.end(), [](const auto& b) { return b.cocoercive(); });
}

ProblemInstance ProblemInstance::with_zero_resolvent(std::size_t position) const {
  if (position > resolvents.size()) fail(ErrorKind::InvalidInput, "zero resolvent position out of range");
  ProblemInstance out = *this;
  out.resolvents.insert(out.resolvents.begin() + static_cast<std::ptrdiff_t>(position),
                        ResolventOperator::zero(dim));
  return out;
}

ProblemInstance ProblemInstance::with_zero_forward(std::size_t position) const {
  if (position > forwards.size()) fail(ErrorKind::InvalidInput, "zero forward position out of range");
  ProblemInstance out = *this;
  out.forwards.insert(out.forwards.begin() + static_cast<std::ptrdiff_t>(position), ForwardOperator::zero(dim));
  return out;
}

}  // namespace graphsplit
