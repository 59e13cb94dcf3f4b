// End-to-end rankings on estimated latent criteria: separation, ambiguity
// adjustment and TOPSIS (or a modified TOPSIS-M fed with ideal alternatives
// taken from the estimated latents and mapped back into mixed space).
#pragma once

#include "icatopsis/ica.hpp"
#include "icatopsis/topsis.hpp"
#include "icatopsis/topsis_m.hpp"

namespace icatopsis {

struct PipelineResult {
  RankingOutcome outcome;
  SeparationResult separation;
};

namespace detail {

inline DecisionMatrix latent_matrix(const Matrix& l_adj, const DecisionMatrix& source) {
  DecisionMatrix d;
  d.values = l_adj;
  for (Index n = 0; n < d.values.rows(); ++n)
    d.criterion_ids.push_back("L" + std::to_string(n + 1));
  d.alternative_ids = source.alternative_ids;
  return d;
}

}  // namespace detail

/// Separate, adjust ambiguities, then rank the adjusted latent estimates with
/// classical TOPSIS. Weights are inherited positionally: after the
/// permutation adjustment, latent criterion n carries w_n.
inline PipelineResult ica_topsis(const DecisionMatrix& matrix, const WeightVector& weights,
                                 const IcaConfig& config) {
  validate_problem(matrix, weights);
  PipelineResult r;
  r.separation = separate(matrix.values, config);
  const DecisionMatrix latents = detail::latent_matrix(r.separation.l_adj, matrix);
  TopsisTrace t = topsis_rank(latents, weights);
  r.outcome = std::move(t.outcome);
  return r;
}

/// Separate and adjust, take PIA/NIA directly from the adjusted latent
/// estimates (element-wise max/min, no normalization), map them through the
/// adjusted mixing matrix into mixed space, normalize them with the observed
/// data's per-criterion denominators, and rank with the modified TOPSIS-M.
inline PipelineResult ica_topsis_m(const DecisionMatrix& matrix, const WeightVector& weights,
                                   const IcaConfig& config, CovarianceOptions opt = {}) {
  validate_problem(matrix, weights);
  PipelineResult r;
  r.separation = separate(matrix.values, config);

  const Vector pia_latent = r.separation.l_adj.rowwise().maxCoeff();
  const Vector nia_latent = r.separation.l_adj.rowwise().minCoeff();
  const Vector denom = normalization_denominators(matrix.values);
  for (Index m = 0; m < denom.size(); ++m)
    if (denom[m] == 0.0)
      throw DegenerateCriterionError("pipelines: criterion " + std::to_string(m + 1) +
                                     " is all-zero, cannot normalize transformed ideals");
  IdealPair ideals;
  ideals.pia = (r.separation.a_adj * pia_latent).cwiseQuotient(denom);
  ideals.nia = (r.separation.a_adj * nia_latent).cwiseQuotient(denom);
  ideals.space_tag = IdealSpace::normalized;

  TopsisMTrace t = topsis_m_rank_with_ideals(matrix, weights, std::move(ideals), opt);
  r.outcome = std::move(t.outcome);
  return r;
}

enum class PipelineKind { ica_topsis, ica_topsis_m };

/// Benchmark upper bound run with perfect knowledge of the mixing process:
/// the separating matrix is the exact inverse of the true mixing matrix, and
/// for the Mahalanobis variant the ideal alternatives are taken from the true
/// latent criteria before being mapped into mixed space. Synthetic use only.
inline RankingOutcome utopic_pipeline(const MixingInstance& instance, const WeightVector& weights,
                                      PipelineKind kind, CovarianceOptions opt = {}) {
  Eigen::FullPivLU<Matrix> lu(instance.mixing);
  if (!lu.isInvertible())
    throw ValidationError("pipelines: true mixing matrix is singular, no utopic bound");
  DecisionMatrix observed = DecisionMatrix::from_values(instance.observed);

  if (kind == PipelineKind::ica_topsis) {
    const Matrix l_ideal = lu.solve(instance.observed);
    return topsis_rank(DecisionMatrix::from_values(l_ideal), weights).outcome;
  }

  const Vector pia_latent = instance.latents.rowwise().maxCoeff();
  const Vector nia_latent = instance.latents.rowwise().minCoeff();
  const Vector denom = normalization_denominators(instance.observed);
  for (Index m = 0; m < denom.size(); ++m)
    if (denom[m] == 0.0)
      throw DegenerateCriterionError("pipelines: criterion " + std::to_string(m + 1) +
                                     " is all-zero, cannot normalize transformed ideals");
  IdealPair ideals;
  ideals.pia = (instance.mixing * pia_latent).cwiseQuotient(denom);
  ideals.nia = (instance.mixing * nia_latent).cwiseQuotient(denom);
  ideals.space_tag = IdealSpace::normalized;
  return topsis_m_rank_with_ideals(observed, weights, std::move(ideals), opt).outcome;
}

}  // namespace icatopsis
