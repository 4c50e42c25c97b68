#include "graphsplit/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "graphsplit/error.hpp"

namespace graphsplit {

namespace {

bool nz(double v, double tol) { return std::abs(v) > tol; }

}  // namespace

CoefficientScheme::CoefficientScheme(Matrix m, Matrix n, Matrix p, Matrix q, Matrix r, Vector delta,
                                     std::string provenance)
    : m_(std::move(m)),
      n_(std::move(n)),
      p_(std::move(p)),
      q_(std::move(q)),
      r_(std::move(r)),
      delta_(std::move(delta)),
      provenance_(std::move(provenance)) {
  const auto nn = static_cast<std::size_t>(m_.rows());
  const auto mm = static_cast<std::size_t>(m_.cols());
  const auto pp = static_cast<std::size_t>(p_.cols());
  if (nn < 2) fail(ErrorKind::InvalidInput, "scheme needs n >= 2");
  if (mm < 1) fail(ErrorKind::InvalidInput, "scheme needs m >= 1");
  if (pp > nn - 1) fail(ErrorKind::InvalidInput, "scheme needs p <= n - 1");
  require_shape(n_, nn, nn, "N");
  require_shape(p_, nn, pp, "P");
  require_shape(q_, nn, pp, "Q");
  require_shape(r_, pp, nn, "R");
  for (auto [mat, name] : {std::pair{&m_, "M"}, {&n_, "N"}, {&p_, "P"}, {&q_, "Q"}, {&r_, "R"}})
    require_finite(*mat, name);
  if (static_cast<std::size_t>(delta_.size()) != nn) fail(ErrorKind::InvalidInput, "delta must have length n");
  for (Eigen::Index i = 0; i < delta_.size(); ++i)
    if (!std::isfinite(delta_(i)) || delta_(i) <= 0.0)
      fail(ErrorKind::InvalidInput, "delta entries must be positive and finite");

  const Matrix mt_pinv = pseudoinverse(m_.transpose());
  u_ = (p_.transpose() - r_) * mt_pinv;
  k_ = (p_.transpose() - q_.transpose()) * mt_pinv;
}

bool CoefficientScheme::q_is_zero(double tol) const { return q_.size() == 0 || q_.cwiseAbs().maxCoeff() <= tol; }

bool CoefficientScheme::q_columns_sum_to_one(double tol) const {
  if (q_.cols() == 0) return true;
  return (q_.colwise().sum().array() - 1.0).abs().maxCoeff() <= tol;
}

CoefficientScheme build_from_graphs(const SubgraphWeights& g, const Matrix& p, const Matrix& q, const Matrix& r,
                                    std::string provenance) {
  const auto& parent = g.parent();
  Vector delta(parent.n());
  for (std::size_t i = 0; i < parent.n(); ++i) delta(i) = 0.5 * parent.degree(i);
  return CoefficientScheme(incidence(g), lower_weights(parent), p, q, r, delta, std::move(provenance));
}

PqrVariant parse_pqr_variant(const std::string& s) {
  if (s == "identity_shift") return PqrVariant::IdentityShift;
  if (s == "aggregated") return PqrVariant::Aggregated;
  if (s == "column_sum") return PqrVariant::ColumnSum;
  fail(ErrorKind::InvalidConfig, "unknown PQR variant '" + s + "'");
}

std::string to_string(PqrVariant v) {
  switch (v) {
    case PqrVariant::IdentityShift: return "identity_shift";
    case PqrVariant::Aggregated: return "aggregated";
    case PqrVariant::ColumnSum: return "column_sum";
  }
  return "?";
}

Pqr standard_pqr(PqrVariant variant, std::size_t n, std::size_t p, const Matrix& m) {
  if (p > n - 1) fail(ErrorKind::UnsupportedScheme, "standard PQR needs p <= n - 1");
  Pqr out{Matrix::Zero(n, p), Matrix::Zero(n, p), Matrix::Zero(p, n)};
  const auto ip = static_cast<Eigen::Index>(p);
  const auto in = static_cast<Eigen::Index>(n);
  switch (variant) {
    case PqrVariant::IdentityShift:
      for (Eigen::Index j = 0; j < ip; ++j) {
        out.P(j + 1, j) = 1.0;
        out.Q(in - ip + j, j) = 1.0;
        out.R(j, j) = 1.0;
      }
      break;
    case PqrVariant::Aggregated:
      for (Eigen::Index j = 0; j < ip; ++j) {
        out.P(ip, j) = 1.0;
        out.Q(in - 1, j) = 1.0;
        out.R(j, 0) = 1.0;
      }
      break;
    case PqrVariant::ColumnSum: {
      if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) < p)
        fail(ErrorKind::UnsupportedScheme, "column_sum PQR needs an n x m incidence with m >= p");
      Vector s(ip);
      for (Eigen::Index i = 0; i < ip; ++i) {
        s(i) = m.col(i).tail(in - i - 1).sum();
        if (std::abs(s(i)) < 1e-14)
          fail(ErrorKind::UnsupportedScheme, "column_sum PQR: column " + std::to_string(i + 1) +
                                                 " has zero sum below the diagonal");
        for (Eigen::Index j = i + 1; j < in; ++j) out.P(j, i) = m(j, i) / s(i);
      }
      Matrix u = Matrix::Zero(ip, m.cols());
      for (Eigen::Index i = 0; i < ip; ++i) u(i, i) = 1.0 / s(i);
      out.R = out.P.transpose() - u * m.transpose();
      for (Eigen::Index i = 0; i < ip; ++i)
        for (Eigen::Index j = i + 1; j < in; ++j) out.R(i, j) = 0.0;
      break;
    }
  }
  return out;
}

std::vector<ExplicitViolation> check_explicit(const CoefficientScheme& s, double tol) {
  std::vector<ExplicitViolation> v;
  const auto n = s.n(), p = s.p();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (nz(s.N()(i, j), tol)) v.push_back({"N", i, j, "N must be strictly lower triangular"});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < p; ++j) {
      if (nz(s.P()(i, j), tol)) v.push_back({"P", i, j, "P must be strictly lower triangular"});
      if (nz(s.Q()(i, j), tol)) v.push_back({"Q", i, j, "Q must be strictly lower triangular"});
    }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (nz(s.R()(i, j), tol)) v.push_back({"R", i, j, "R must be lower triangular"});
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = j + 1; i < n; ++i) {
      if (!nz(s.P()(i, j), tol)) continue;
      for (std::size_t k = j + 1; k <= i; ++k)
        if (nz(s.Q()(k, j), tol))
          v.push_back({"Q", k, j,
                       "Q entry must vanish because P(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") is nonzero"});
    }
  return v;
}

bool AssumptionReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const auto& it) { return it.pass; });
}

const AssumptionItem& AssumptionReport::item(const std::string& id) const {
  for (const auto& it : items)
    if (it.id == id) return it;
  fail(ErrorKind::Internal, "no assumption item '" + id + "'");
}

std::vector<std::string> AssumptionReport::failing() const {
  std::vector<std::string> out;
  for (const auto& it : items)
    if (!it.pass) out.push_back(it.id);
  return out;
}

AssumptionReport check_assumptions(const CoefficientScheme& s, double tol) {
  AssumptionReport rep;
  const auto n = static_cast<Eigen::Index>(s.n());

  const auto ker = kernel_is_span_ones(s.M().transpose(), tol);
  rep.items.push_back({"kernel", "ker M^T = span{1}", ker.is_span_ones, static_cast<double>(ker.kernel_dim),
                       "kernel dimension " + std::to_string(ker.kernel_dim) + ", |M^T 1| = " +
                           std::to_string(ker.ones_residual)});

  const double sum_delta = s.delta().sum();
  const double gap = s.N().sum() - sum_delta;
  rep.items.push_back({"n_delta", "sum of N entries equals sum of delta",
                       std::abs(gap) <= tol * std::max(1.0, sum_delta), gap, "sum N - sum delta"});

  const double pcol = s.p() ? (s.P().colwise().sum().array() - 1.0).abs().maxCoeff() : 0.0;
  rep.items.push_back({"p_columns", "P^T 1 = 1", pcol <= tol, pcol, "max |P^T 1 - 1|"});

  const double rrow = s.p() ? (s.R().rowwise().sum().array() - 1.0).abs().maxCoeff() : 0.0;
  rep.items.push_back({"r_rows", "R 1 = 1", rrow <= tol, rrow, "max |R 1 - 1|"});

  const Matrix d = s.delta().asDiagonal();
  const Matrix core = 2.0 * d - s.N() - s.N().transpose() - s.M() * s.M().transpose();
  const double lmin = min_eigenvalue(core);
  const double scale = std::max(1.0, core.cwiseAbs().maxCoeff() * static_cast<double>(n));
  rep.items.push_back({"psd", "2D - N - N^T - M M^T is PSD", lmin >= -tol * scale, lmin, "minimum eigenvalue"});

  const bool qz = s.q_is_zero();
  const bool q1 = s.q_columns_sum_to_one(tol);
  const double qdev = s.p() ? (s.Q().colwise().sum().array() - 1.0).abs().maxCoeff() : 0.0;
  rep.items.push_back({"q_condition", "Q = 0 or Q^T 1 = 1", qz || q1, qz ? 0.0 : qdev,
                       qz ? "Q = 0" : "max |Q^T 1 - 1|"});

  const auto ex = check_explicit(s);
  std::string detail = ex.empty() ? "explicit" : "";
  for (std::size_t k = 0; k < ex.size() && k < 5; ++k)
    detail += ex[k].matrix + "(" + std::to_string(ex[k].i + 1) + "," + std::to_string(ex[k].j + 1) + ") ";
  rep.items.push_back({"explicit", "triangular structure and Q-zeroing rule", ex.empty(),
                       static_cast<double>(ex.size()), detail});
  return rep;
}

double compute_tau(const CoefficientScheme& s, Regularity reg) {
  const double u = spectral_norm(s.U());
  if (reg == Regularity::Cocoercive) {
    if (!s.q_is_zero()) fail(ErrorKind::InvalidConfig, "cocoercive mode needs Q = 0");
    return u * u;
  }
  if (!s.q_columns_sum_to_one()) fail(ErrorKind::InvalidConfig, "Lipschitz mode needs Q^T 1 = 1");
  const double k = spectral_norm(s.K());
  return k * k + u * u;
}

bool ParameterRanges::gamma_admissible(double gamma) const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) return false;
  return unbounded() || gamma < *gamma_max;
}

double ParameterRanges::lambda_max(double gamma) const {
  const double glt = gamma * ell * tau;
  return regularity == Regularity::Lipschitz ? 1.0 - glt : (2.0 - glt) / 2.0;
}

bool ParameterRanges::lambda_admissible(double gamma, double lambda) const {
  return lambda > 0.0 && std::isfinite(lambda) && lambda <= lambda_max(gamma) * (1.0 + 1e-12);
}

double ParameterRanges::rho(double gamma, double theta) const {
  const double glt = gamma * ell * tau;
  return regularity == Regularity::Lipschitz ? theta / (1.0 - glt) : 2.0 * theta / (2.0 - glt);
}

std::string ParameterRanges::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << "gamma in (0, gamma_max) with gamma_max = ";
  if (unbounded())
    os << "inf";
  else
    os << *gamma_max;
  os << ", lambda in (0, "
     << (regularity == Regularity::Lipschitz ? "1 - gamma*ell*tau" : "(2 - gamma*ell*tau)/2") << "] with tau = "
     << tau << ", ell = " << ell;
  return os.str();
}

ParameterRanges parameter_ranges(const CoefficientScheme& s, double ell, Regularity reg) {
  if (!(ell >= 0.0) || !std::isfinite(ell)) fail(ErrorKind::InvalidInput, "ell must be finite and non-negative");
  ParameterRanges r;
  r.regularity = reg;
  r.ell = ell;
  r.tau = compute_tau(s, reg);
  const double lt = ell * r.tau;
  if (lt > 0.0) r.gamma_max = (reg == Regularity::Lipschitz ? 1.0 : 2.0) / lt;
  return r;
}

VariantPsdReport check_variant_psd(const CoefficientScheme& s, double gamma, double ell, Regularity reg, double tol) {
  const Matrix d = s.delta().asDiagonal();
  Matrix l = 2.0 * d - s.N() - s.N().transpose() - s.M() * s.M().transpose();
  const Matrix pr = s.P() - s.R().transpose();
  if (reg == Regularity::Lipschitz) {
    const Matrix pq = s.P() - s.Q();
    l -= gamma * ell * (pq * pq.transpose() + pr * pr.transpose());
  } else {
    l -= 0.5 * gamma * ell * pr * pr.transpose();
  }
  VariantPsdReport rep;
  rep.min_eigenvalue = min_eigenvalue(l);
  rep.pass = rep.min_eigenvalue >= -tol * std::max(1.0, l.cwiseAbs().maxCoeff());
  return rep;
}

LocalityReport locality_audit(const CoefficientScheme& s, const WeightedGraph& g, const WeightedGraph* sub,
                              double tol) {
  const auto n = s.n(), p = s.p(), m = s.m();
  if (g.n() != n) fail(ErrorKind::InvalidInput, "locality graph has the wrong node count");
  LocalityReport rep;
  rep.x_reads.resize(n);
  rep.z_reads.resize(n);
  const Matrix pq = s.P() - s.Q();
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::size_t> reads;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && nz(s.N()(i, j), tol)) reads.insert(j);
    for (std::size_t j = 0; j < p; ++j) {
      if (nz(pq(i, j), tol))
        for (std::size_t l = 0; l < n; ++l)
          if (nz(s.R()(j, l), tol)) reads.insert(l);
      if (nz(s.Q()(i, j), tol))
        for (std::size_t l = 0; l < n; ++l)
          if (nz(s.P()(l, j), tol)) reads.insert(l);
    }
    reads.erase(i);
    rep.x_reads[i].assign(reads.begin(), reads.end());
    for (auto j : reads)
      if (!g.has_edge(i, j)) rep.violations.push_back({i, "x", j});
    for (std::size_t e = 0; e < m; ++e) {
      if (!nz(s.M()(i, e), tol)) continue;
      rep.z_reads[i].push_back(e);
      if (sub) {
        const bool owned = e < sub->edge_count() && (sub->edges()[e].i == i || sub->edges()[e].j == i);
        if (!owned) rep.violations.push_back({i, "z", e});
      }
    }
  }
  return rep;
}

}  // namespace graphsplit
