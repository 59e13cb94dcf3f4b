// Blind source separation in the determined case (as many latent criteria as
// observed ones): eigendecomposition whitening, kurtosis-based FastICA with
// deflation (Hyvarinen & Oja), and JADE, joint diagonalization of
// fourth-order cumulant matrices by Jacobi rotations (Cardoso & Souloumiac).
#pragma once

#include "icatopsis/ambiguity.hpp"
#include "icatopsis/core.hpp"

namespace icatopsis {

/// Affine transform taking observed data to zero mean and identity covariance.
struct WhiteningTransform {
  Vector mean;
  Matrix w;      // whitening matrix
  Matrix w_inv;  // dewhitening matrix
};

enum class IcaAlgorithm { fastica_kurtosis, jade };

struct IcaConfig {
  IcaAlgorithm algorithm = IcaAlgorithm::jade;
  int max_iterations = 1000;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  int restarts = 5;
};

inline void validate_config(const IcaConfig& config) {
  if (!(config.tolerance > 0.0)) throw ValidationError("ica: tolerance must be positive");
  if (config.max_iterations < 1) throw ValidationError("ica: max_iterations must be >= 1");
  if (config.restarts < 1) throw ValidationError("ica: restarts must be >= 1");
}

/// Centers and decorrelates: Z = W * (V - mean), cov(Z) = I. W is built from
/// the eigendecomposition of the population covariance of V.
inline std::pair<Matrix, WhiteningTransform> whiten(const Matrix& v) {
  const Index m = v.rows();
  const Index k = v.cols();
  if (k < 2) throw ValidationError("ica: whitening needs at least 2 samples");
  WhiteningTransform t;
  t.mean = v.rowwise().mean();
  const Matrix centered = v.colwise() - t.mean;
  const Matrix cov = centered * centered.transpose() / static_cast<double>(k);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success) throw Error("ica: eigendecomposition of covariance failed");
  const Vector evals = eig.eigenvalues();
  if (evals(0) <= 0.0 || evals(0) < 1e-12 * evals(m - 1))
    throw Error(
        "ica: covariance of observed data is rank-deficient; the data carry fewer independent "
        "latent criteria than observed criteria (determined-case assumption violated)");
  const Vector inv_sqrt = evals.array().rsqrt();
  t.w = inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
  t.w_inv = eig.eigenvectors() * evals.array().sqrt().matrix().asDiagonal();
  return {t.w * centered, std::move(t)};
}

/// Excess kurtosis from raw sample moments, E{y^4} - 3(E{y^2})^2. A constant
/// input has zero variance; the result is pinned to 0 and flagged degenerate.
template <typename Derived>
double kurtosis(const Eigen::MatrixBase<Derived>& y, bool* degenerate = nullptr) {
  if (degenerate) *degenerate = false;
  if (y.size() < 4) throw ValidationError("ica: kurtosis needs at least 4 samples");
  if (!y.allFinite()) throw ValidationError("ica: kurtosis input has non-finite entries");
  if (y.maxCoeff() == y.minCoeff()) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  const double m2 = y.array().square().mean();
  const double m4 = y.array().square().square().mean();
  return m4 - 3.0 * m2 * m2;
}

namespace detail {

inline SeparationResult compose_separation(const Matrix& rotation, const WhiteningTransform& wt,
                                           const Matrix& v) {
  SeparationResult r;
  r.b = rotation * wt.w;
  r.a_hat = r.b.partialPivLu().inverse();
  r.l_hat = r.b * v;
  apply_adjustments(r);
  return r;
}

inline void flag_low_kurtosis(SeparationResult& r) {
  for (Index n = 0; n < r.l_hat.rows(); ++n) {
    const Vector row = r.l_hat.row(n).transpose();
    const Vector centered = row.array() - row.mean();
    const double variance = centered.squaredNorm() / static_cast<double>(row.size());
    if (variance == 0.0) continue;
    const Vector z = centered / std::sqrt(variance);
    if (std::abs(kurtosis(z)) < 0.1)
      r.warnings.push_back("ica: component " + std::to_string(n + 1) +
                           " has near-zero kurtosis; separation of near-Gaussian criteria is "
                           "unreliable");
  }
}

inline Vector random_unit_vector(Index m, RandomEngine& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector w(m);
  for (;;) {
    for (Index i = 0; i < m; ++i) w(i) = gauss(rng);
    const double norm = w.norm();
    if (norm > 1e-12) return w / norm;
  }
}

// Projects w onto the orthogonal complement of the first `rows` rows of
// basis; returns false if the remainder is numerically zero.
inline bool gram_schmidt(Vector& w, const Matrix& basis, Index rows) {
  for (Index r = 0; r < rows; ++r) w -= basis.row(r).dot(w) * basis.row(r).transpose();
  const double norm = w.norm();
  if (norm < 1e-12) return false;
  w /= norm;
  return true;
}

}  // namespace detail

/// Deflationary FastICA with the kurtosis contrast: per component, fixed-point
/// iteration w <- E{z (w^T z)^3} - 3w on whitened data, Gram-Schmidt
/// decorrelation against already-extracted components, restarts from fresh
/// random unit vectors on non-convergence.
inline SeparationResult fastica(const Matrix& v, const IcaConfig& config) {
  validate_config(config);
  const Index m = v.rows();
  const Index k = v.cols();
  auto [z, wt] = whiten(v);
  if (m == 1) {
    SeparationResult r = detail::compose_separation(Matrix::Identity(1, 1), wt, v);
    detail::flag_low_kurtosis(r);
    return r;
  }

  RandomEngine rng(config.seed);
  Matrix rotation = Matrix::Zero(m, m);
  for (Index comp = 0; comp < m; ++comp) {
    bool converged = false;
    Vector best_w = Vector::Zero(m);
    double best_delta = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < config.restarts && !converged; ++attempt) {
      Vector w = detail::random_unit_vector(m, rng);
      if (!detail::gram_schmidt(w, rotation, comp)) continue;
      for (int iter = 0; iter < config.max_iterations; ++iter) {
        const Vector y = z.transpose() * w;
        Vector w_new = z * y.array().cube().matrix() / static_cast<double>(k) - 3.0 * w;
        if (!detail::gram_schmidt(w_new, rotation, comp)) break;  // contrast vanished
        const double delta = std::abs(1.0 - std::abs(w_new.dot(w)));
        if (delta < best_delta) {
          best_delta = delta;
          best_w = w_new;
        }
        w = w_new;
        if (delta < config.tolerance) {
          converged = true;
          break;
        }
      }
    }
    if (!converged) {
      Matrix best_rows(comp + 1, m);
      best_rows.topRows(comp) = rotation.topRows(comp);
      best_rows.row(comp) = best_w.transpose();
      throw ConvergenceError(
          "ica: fastica failed to converge on component " + std::to_string(comp + 1) + " after " +
              std::to_string(config.restarts) + " restarts (best residual " +
              std::to_string(best_delta) + "); sources may be Gaussian",
          Matrix(best_rows * wt.w));
    }
    rotation.row(comp) = best_w.transpose();
  }
  SeparationResult r = detail::compose_separation(rotation, wt, v);
  detail::flag_low_kurtosis(r);
  return r;
}

namespace detail {

// Parallel set of M(M+1)/2 symmetric fourth-order cumulant slices of the
// whitened data, Q_ij(a,b) = Cum(z_a, z_b, z_i, z_j) for i <= j, using the
// identity covariance the whitening guarantees.
inline std::vector<Matrix> cumulant_slices(const Matrix& z) {
  const Index m = z.rows();
  const Index k = z.cols();
  std::vector<Matrix> slices;
  slices.reserve(static_cast<std::size_t>(m * (m + 1) / 2));
  for (Index i = 0; i < m; ++i) {
    for (Index j = i; j < m; ++j) {
      const Eigen::ArrayXd scale = (z.row(i).array() * z.row(j).array()).transpose();
      const Matrix scaled = z.array().rowwise() * scale.transpose();
      Matrix q = scaled * z.transpose() / static_cast<double>(k);
      if (i == j) q -= Matrix::Identity(m, m);
      q(i, j) -= 1.0;
      q(j, i) -= 1.0;
      slices.push_back(std::move(q));
    }
  }
  return slices;
}

}  // namespace detail

/// JADE: whitens, estimates the full set of symmetric fourth-order cumulant
/// slices, and jointly diagonalizes them with Jacobi rotations until every
/// rotation angle in a full sweep falls below tolerance/sqrt(K).
inline SeparationResult jade(const Matrix& v, const IcaConfig& config) {
  validate_config(config);
  const Index m = v.rows();
  const Index k = v.cols();
  auto [z, wt] = whiten(v);
  if (m == 1) {
    SeparationResult r = detail::compose_separation(Matrix::Identity(1, 1), wt, v);
    detail::flag_low_kurtosis(r);
    return r;
  }

  std::vector<Matrix> slices = detail::cumulant_slices(z);
  Matrix v_rot = Matrix::Identity(m, m);
  const double threshold = config.tolerance / std::sqrt(static_cast<double>(k));
  const int max_sweeps = std::min(config.max_iterations, 100);  // reference sweep cap

  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p < m - 1; ++p) {
      for (Index q = p + 1; q < m; ++q) {
        double ton = 0.0, toff = 0.0, g11 = 0.0, g22 = 0.0, g12 = 0.0;
        for (const Matrix& slice : slices) {
          const double a = slice(p, p) - slice(q, q);
          const double b = slice(p, q) + slice(q, p);
          g11 += a * a;
          g22 += b * b;
          g12 += a * b;
        }
        ton = g11 - g22;
        toff = 2.0 * g12;
        const double theta = 0.5 * std::atan2(toff, ton + std::hypot(ton, toff));
        if (std::abs(theta) <= threshold) continue;
        rotated = true;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (Matrix& slice : slices) {
          // slice <- G^T * slice * G with G = [[c, -s], [s, c]] on (p, q)
          const Vector col_p = c * slice.col(p) + s * slice.col(q);
          const Vector col_q = -s * slice.col(p) + c * slice.col(q);
          slice.col(p) = col_p;
          slice.col(q) = col_q;
          const Eigen::RowVectorXd row_p = c * slice.row(p) + s * slice.row(q);
          const Eigen::RowVectorXd row_q = -s * slice.row(p) + c * slice.row(q);
          slice.row(p) = row_p;
          slice.row(q) = row_q;
        }
        const Vector v_p = c * v_rot.col(p) + s * v_rot.col(q);
        const Vector v_q = -s * v_rot.col(p) + c * v_rot.col(q);
        v_rot.col(p) = v_p;
        v_rot.col(q) = v_q;
      }
    }
    if (!rotated) converged = true;
  }
  if (!converged)
    throw ConvergenceError("ica: jade joint diagonalization did not settle within " +
                               std::to_string(max_sweeps) + " sweeps",
                           Matrix(v_rot.transpose() * wt.w));

  SeparationResult r = detail::compose_separation(v_rot.transpose(), wt, v);
  detail::flag_low_kurtosis(r);
  return r;
}

/// Dispatch on the configured algorithm.
inline SeparationResult separate(const Matrix& v, const IcaConfig& config) {
  return config.algorithm == IcaAlgorithm::jade ? jade(v, config) : fastica(v, config);
}

}  // namespace icatopsis
