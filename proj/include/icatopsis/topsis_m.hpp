// TOPSIS-M: TOPSIS with Mahalanobis distances weighted by diag(w) and the
// inverse covariance of the normalized data, plus a whitened-space Euclidean
// route that is algebraically equivalent under equal weights.
#pragma once

#include "icatopsis/core.hpp"
#include "icatopsis/topsis.hpp"

namespace icatopsis {

struct CovarianceOptions {
  bool ridge = false;              // opt-in Sigma + lambda*I, lambda = 1e-8 * trace / M
  bool bessel_correction = false;  // 1/(K-1) instead of the default 1/K
};

/// Covariance of the normalized data with its Cholesky factor and the
/// diagonal weight matrix entering the Mahalanobis form.
struct CovarianceModel {
  Matrix sigma;       // M x M
  Matrix cholesky_f;  // lower triangular, sigma = F * F^T
  Matrix delta;       // diag(w)
};

namespace detail {

inline Matrix cholesky_or_throw(const Matrix& sigma, const CovarianceOptions& opt) {
  Matrix s = sigma;
  if (opt.ridge) {
    const double lambda = 1e-8 * s.trace() / static_cast<double>(s.rows());
    if (lambda > 0.0) s.diagonal().array() += lambda;
  }
  Eigen::LLT<Matrix> llt(s);
  bool ok = llt.info() == Eigen::Success;
  Matrix f;
  if (ok) {
    f = llt.matrixL();
    const double dmax = f.diagonal().maxCoeff();
    const double dmin = f.diagonal().minCoeff();
    ok = dmin > 0.0 && dmin >= 1e-8 * dmax;
  }
  if (!ok)
    throw SingularCovarianceError(
        "topsis_m: covariance of normalized data is singular or indefinite" +
        std::string(opt.ridge ? " (even with ridge)" : "; enable ridge regularization to proceed"));
  return f;
}

}  // namespace detail

/// Population covariance (1/K) of the normalized data over alternatives,
/// factored by Cholesky. delta defaults to the identity.
inline CovarianceModel sample_covariance(const Matrix& u, CovarianceOptions opt = {}) {
  const Index k = u.cols();
  if (k < 2) throw ValidationError("topsis_m: covariance needs at least 2 alternatives");
  const Vector mean = u.rowwise().mean();
  const Matrix centered = u.colwise() - mean;
  const double denom = opt.bessel_correction ? static_cast<double>(k - 1) : static_cast<double>(k);
  CovarianceModel model;
  model.sigma = centered * centered.transpose() / denom;
  model.cholesky_f = detail::cholesky_or_throw(model.sigma, opt);
  model.delta = Matrix::Identity(u.rows(), u.rows());
  return model;
}

inline CovarianceModel sample_covariance(const Matrix& u, const WeightVector& weights,
                                         CovarianceOptions opt = {}) {
  CovarianceModel model = sample_covariance(u, opt);
  model.delta = Matrix(weights.as_vector().asDiagonal());
  return model;
}

namespace detail {

// Quadratic-form route: solves sigma * x = delta*d by LU, independent of the
// Cholesky factor so the whitened oracle stays a separate algebraic path.
inline double mahalanobis_from_lu(const Eigen::PartialPivLU<Matrix>& lu, const Matrix& delta,
                                  const Vector& diff) {
  const Vector y = delta * diff;
  const Vector x = lu.solve(y);
  double qf = y.dot(x);
  if (qf < 0.0) {
    const double scale = y.norm() * x.norm();
    if (-qf <= 1e-10 * scale)
      qf = 0.0;
    else
      throw Error("topsis_m: indefinite Mahalanobis quadratic form (" + std::to_string(qf) + ")");
  }
  return std::sqrt(qf);
}

}  // namespace detail

/// sqrt((u_k - ideal)^T delta^T sigma^-1 delta (u_k - ideal)).
inline double mahalanobis_distance(const Vector& u_k, const Vector& ideal,
                                   const CovarianceModel& cov) {
  if (u_k.size() != ideal.size() || u_k.size() != cov.sigma.rows())
    throw ValidationError("topsis_m: mahalanobis operand size mismatch");
  Eigen::PartialPivLU<Matrix> lu(cov.sigma);
  return detail::mahalanobis_from_lu(lu, cov.delta, u_k - ideal);
}

struct TopsisMTrace {
  Matrix normalized;  // U
  IdealPair ideals;   // in normalized space
  CovarianceModel cov;
  Vector dm_plus;
  Vector dm_minus;
  RankingOutcome outcome;
};

namespace detail {

inline TopsisMTrace topsis_m_core(const WeightVector& weights, IdealPair ideals, Matrix u,
                                  CovarianceOptions opt) {
  TopsisMTrace t;
  t.normalized = std::move(u);
  t.cov = sample_covariance(t.normalized, weights, opt);
  t.ideals = std::move(ideals);
  const Index k = t.normalized.cols();
  t.dm_plus.resize(k);
  t.dm_minus.resize(k);
  Eigen::PartialPivLU<Matrix> lu(t.cov.sigma);
  for (Index i = 0; i < k; ++i) {
    t.dm_plus[i] = mahalanobis_from_lu(lu, t.cov.delta, t.normalized.col(i) - t.ideals.pia);
    t.dm_minus[i] = mahalanobis_from_lu(lu, t.cov.delta, t.normalized.col(i) - t.ideals.nia);
  }
  t.outcome = closeness_from_distances(t.dm_plus, t.dm_minus, t.ideals, "topsis_m");
  return t;
}

}  // namespace detail

/// Algorithm steps: normalize, extract PIA/NIA from U (weights enter only
/// inside the distance), covariance, Mahalanobis distances, closeness.
inline TopsisMTrace topsis_m_rank(const DecisionMatrix& matrix, const WeightVector& weights,
                                  CovarianceOptions opt = {}) {
  validate_problem(matrix, weights);
  Matrix u = vector_normalize(matrix);
  IdealPair ideals = extract_ideals(u, IdealSpace::normalized);
  return detail::topsis_m_core(weights, std::move(ideals), std::move(u), opt);
}

/// Same as topsis_m_rank but with externally supplied PIA/NIA, already
/// expressed in vector-normalized space (same per-criterion denominators
/// sqrt(sum_k v_{m,k}^2) as the data).
inline TopsisMTrace topsis_m_rank_with_ideals(const DecisionMatrix& matrix,
                                              const WeightVector& weights, IdealPair ideals,
                                              CovarianceOptions opt = {}) {
  validate_problem(matrix, weights);
  if (ideals.pia.size() != matrix.criteria() || ideals.nia.size() != matrix.criteria())
    throw ValidationError("topsis_m: supplied ideals have length " +
                          std::to_string(ideals.pia.size()) + "/" +
                          std::to_string(ideals.nia.size()) + ", expected " +
                          std::to_string(matrix.criteria()));
  Matrix u = vector_normalize(matrix);
  return detail::topsis_m_core(weights, std::move(ideals), std::move(u), opt);
}

struct WhitenedOracleTrace {
  Matrix transformed;      // F^-1 * delta * U
  Matrix transformed_cov;  // should be w^2 * I
  RankingOutcome outcome;
};

/// Whitened-space route: transforms data and ideals by F^-1 * diag(w) and
/// ranks with plain Euclidean distances. Requires equal weights (the
/// equivalence with the Mahalanobis route does not hold otherwise) and a
/// positive definite covariance.
inline WhitenedOracleTrace whitened_euclidean_oracle(const DecisionMatrix& matrix,
                                                     const WeightVector& weights,
                                                     CovarianceOptions opt = {}) {
  validate_problem(matrix, weights);
  if (!weights.all_equal())
    throw ValidationError("topsis_m: whitened oracle requires equal weights");
  const Matrix u = vector_normalize(matrix);
  const IdealPair ideals = extract_ideals(u, IdealSpace::normalized);
  const CovarianceModel cov = sample_covariance(u, weights, opt);
  const auto f = cov.cholesky_f.triangularView<Eigen::Lower>();

  WhitenedOracleTrace t;
  t.transformed = f.solve(cov.delta * u);
  IdealPair tideals;
  tideals.pia = f.solve(cov.delta * ideals.pia);
  tideals.nia = f.solve(cov.delta * ideals.nia);
  tideals.space_tag = IdealSpace::normalized;

  const Vector mean = t.transformed.rowwise().mean();
  const Matrix centered = t.transformed.colwise() - mean;
  const double denom = opt.bessel_correction ? static_cast<double>(u.cols() - 1)
                                             : static_cast<double>(u.cols());
  t.transformed_cov = centered * centered.transpose() / denom;

  const Vector d_plus = euclidean_distances(t.transformed, tideals.pia);
  const Vector d_minus = euclidean_distances(t.transformed, tideals.nia);
  t.outcome = closeness_from_distances(d_plus, d_minus, tideals, "topsis_m");
  return t;
}

}  // namespace icatopsis
