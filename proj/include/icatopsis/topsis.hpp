// Classical TOPSIS: rank by closeness to the positive ideal alternative and
// distance from the negative one, in weighted vector-normalized space.
#pragma once

#include "icatopsis/core.hpp"

namespace icatopsis {

/// Per-criterion Euclidean norms sqrt(sum_k v_{m,k}^2), the vector
/// normalization denominators.
inline Vector normalization_denominators(const Matrix& values) {
  return values.rowwise().norm();
}

/// Step 1: u_{m,k} = v_{m,k} / sqrt(sum_k v_{m,k}^2). Rows of the result have
/// unit Euclidean norm. Negative entries are permitted (estimated latent
/// criteria can be negative); an all-zero criterion row is an error.
inline Matrix vector_normalize(const DecisionMatrix& matrix) {
  const Vector d = normalization_denominators(matrix.values);
  for (Index m = 0; m < d.size(); ++m)
    if (d[m] == 0.0)
      throw DegenerateCriterionError("topsis: criterion " + std::to_string(m + 1) +
                                     " is all-zero, vector normalization undefined");
  return d.cwiseInverse().asDiagonal() * matrix.values;
}

/// Element-wise max/min over alternatives of each criterion row.
inline IdealPair extract_ideals(const Matrix& data, IdealSpace tag) {
  IdealPair p;
  p.pia = data.rowwise().maxCoeff();
  p.nia = data.rowwise().minCoeff();
  p.space_tag = tag;
  return p;
}

/// r_k = d_minus / (d_plus + d_minus), with the degenerate d+ + d- = 0 case
/// pinned to the neutral 0.5 and flagged.
inline RankingOutcome closeness_from_distances(const Vector& d_plus, const Vector& d_minus,
                                               IdealPair ideals, const char* module_tag) {
  RankingOutcome out;
  const Index k = d_plus.size();
  out.closeness.resize(k);
  for (Index i = 0; i < k; ++i) {
    const double denom = d_plus[i] + d_minus[i];
    if (denom == 0.0) {
      out.closeness[i] = 0.5;
      out.warnings.push_back(std::string(module_tag) + ": degenerate distances for alternative " +
                             std::to_string(i + 1) + " (closeness pinned to 0.5)");
    } else {
      out.closeness[i] = d_minus[i] / denom;
    }
  }
  out.order = ranking_order(out.closeness);
  out.ideals = std::move(ideals);
  return out;
}

/// Column-wise Euclidean distances from each column of `data` to `point`.
inline Vector euclidean_distances(const Matrix& data, const Vector& point) {
  return (data.colwise() - point).colwise().norm().transpose();
}

/// Intermediate quantities of a TOPSIS run.
struct TopsisTrace {
  Matrix normalized;  // U
  Matrix weighted;    // P = diag(w) * U
  IdealPair ideals;
  Vector d_plus;
  Vector d_minus;
  RankingOutcome outcome;
};

/// Runs the five TOPSIS steps: normalize, weight, extract PIA/NIA, Euclidean
/// distances, closeness r_k = D-/(D+ + D-); ranking in descending closeness.
inline TopsisTrace topsis_rank(const DecisionMatrix& matrix, const WeightVector& weights) {
  validate_problem(matrix, weights);
  TopsisTrace t;
  t.normalized = vector_normalize(matrix);
  t.weighted = weights.as_vector().asDiagonal() * t.normalized;
  t.ideals = extract_ideals(t.weighted, IdealSpace::weighted_normalized);
  t.d_plus = euclidean_distances(t.weighted, t.ideals.pia);
  t.d_minus = euclidean_distances(t.weighted, t.ideals.nia);
  t.outcome = closeness_from_distances(t.d_plus, t.d_minus, t.ideals, "topsis");
  return t;
}

}  // namespace icatopsis
