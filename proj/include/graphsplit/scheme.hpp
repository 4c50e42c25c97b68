#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "graphsplit/graphs.hpp"
#include "graphsplit/numlin.hpp"
#include "graphsplit/operators.hpp"

namespace graphsplit {

/// Coefficients (M, N, P, Q, R, delta) of the graph splitting iteration.
class CoefficientScheme {
 public:
  CoefficientScheme() = default;
  CoefficientScheme(Matrix m, Matrix n, Matrix p, Matrix q, Matrix r, Vector delta,
                    std::string provenance = {});

  std::size_t n() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t m() const { return static_cast<std::size_t>(m_.cols()); }
  std::size_t p() const { return static_cast<std::size_t>(p_.cols()); }

  const Matrix& M() const { return m_; }
  const Matrix& N() const { return n_; }
  const Matrix& P() const { return p_; }
  const Matrix& Q() const { return q_; }
  const Matrix& R() const { return r_; }
  const Vector& delta() const { return delta_; }
  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  /// (P^T - R)(M^T)^+
  const Matrix& U() const { return u_; }
  /// (P^T - Q^T)(M^T)^+
  const Matrix& K() const { return k_; }

  bool q_is_zero(double tol = 1e-12) const;
  bool q_columns_sum_to_one(double tol = 1e-9) const;

 private:
  Matrix m_, n_, p_, q_, r_;
  Vector delta_;
  Matrix u_, k_;
  std::string provenance_;
};

CoefficientScheme build_from_graphs(const SubgraphWeights& g, const Matrix& p, const Matrix& q,
                                    const Matrix& r, std::string provenance = {});

struct Pqr {
  Matrix P, Q, R;
};

enum class PqrVariant { IdentityShift, Aggregated, ColumnSum };
PqrVariant parse_pqr_variant(const std::string& s);
std::string to_string(PqrVariant v);

/// Standard choices of P, Q, R. ColumnSum needs the incidence matrix and sets Q = 0.
Pqr standard_pqr(PqrVariant variant, std::size_t n, std::size_t p, const Matrix& m = {});

struct ExplicitViolation {
  std::string matrix;
  std::size_t i = 0;  // 0-based
  std::size_t j = 0;
  std::string reason;
};

std::vector<ExplicitViolation> check_explicit(const CoefficientScheme& s, double tol = 1e-12);

struct AssumptionItem {
  std::string id;
  std::string description;
  bool pass = false;
  double witness = 0.0;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionItem> items;
  bool all_pass() const;
  const AssumptionItem& item(const std::string& id) const;
  std::vector<std::string> failing() const;
};

/// Items: kernel, n_delta, p_columns, r_rows, psd, q_condition, explicit.
AssumptionReport check_assumptions(const CoefficientScheme& s, double tol = 1e-9);

double compute_tau(const CoefficientScheme& s, Regularity reg);

struct ParameterRanges {
  Regularity regularity = Regularity::Cocoercive;
  double tau = 0.0;
  double ell = 0.0;
  std::optional<double> gamma_max;  // nullopt: no upper bound on gamma

  bool unbounded() const { return !gamma_max.has_value(); }
  bool gamma_admissible(double gamma) const;
  double lambda_max(double gamma) const;
  bool lambda_admissible(double gamma, double lambda) const;
  double rho(double gamma, double theta = 1.0) const;
  std::string describe() const;
};

ParameterRanges parameter_ranges(const CoefficientScheme& s, double ell, Regularity reg);

struct VariantPsdReport {
  bool pass = false;
  double min_eigenvalue = 0.0;
};

VariantPsdReport check_variant_psd(const CoefficientScheme& s, double gamma, double ell, Regularity reg,
                                   double tol = 1e-9);

struct LocalityViolation {
  std::size_t node = 0;
  std::string kind;  // "x" or "z"
  std::size_t other = 0;
};

struct LocalityReport {
  std::vector<std::vector<std::size_t>> x_reads;
  std::vector<std::vector<std::size_t>> z_reads;
  std::vector<LocalityViolation> violations;
};

/// Lists what each node reads during one sweep and flags reads of non-neighbours in g.
/// Dual reads are checked against the endpoints of edges of `sub` when given.
LocalityReport locality_audit(const CoefficientScheme& s, const WeightedGraph& g,
                              const WeightedGraph* sub = nullptr, double tol = 1e-12);

}  // namespace graphsplit
