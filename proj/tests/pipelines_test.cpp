#include "icatopsis/pipelines.hpp"

#include "icatopsis/metrics.hpp"
#include "icatopsis/synth.hpp"

#include <gtest/gtest.h>

using namespace icatopsis;

namespace {

constexpr double kAlpha = 0.7;
constexpr double kBeta = -0.25;

RankingOutcome target_of(const MixingInstance& inst, const WeightVector& w) {
  return topsis_rank(DecisionMatrix::from_values(inst.latents), w).outcome;
}

TEST(IcaTopsis, RecoversTargetRankingBetterThanTopsisOnMixedData) {
  // correlated two-criteria setup, noiseless, averaged over seeds
  const int seeds = 100;
  double tau_ica = 0.0, tau_raw = 0.0;
  const WeightVector w = WeightVector::equal(2);
  for (int seed = 0; seed < seeds; ++seed) {
    const MixingInstance inst = make_instance(make_mixing_2x2(kAlpha, kBeta), 200, std::nullopt,
                                              1000 + static_cast<std::uint64_t>(seed));
    const RankingOutcome target = target_of(inst, w);
    const DecisionMatrix dm = DecisionMatrix::from_values(inst.observed);
    IcaConfig config;
    config.seed = static_cast<std::uint64_t>(seed);
    tau_ica += kendall_tau(ica_topsis(dm, w, config).outcome.order, target.order);
    tau_raw += kendall_tau(topsis_rank(dm, w).outcome.order, target.order);
  }
  EXPECT_GT(tau_ica / seeds, tau_raw / seeds);
  EXPECT_GT(tau_ica / seeds, 0.9);
}

TEST(IcaTopsis, IdentityMixingStaysCloseToDirectTopsis) {
  const int seeds = 100;
  double tau = 0.0;
  const WeightVector w = WeightVector::equal(2);
  for (int seed = 0; seed < seeds; ++seed) {
    const MixingInstance inst = make_instance(Matrix::Identity(2, 2), 200, std::nullopt,
                                              5000 + static_cast<std::uint64_t>(seed));
    const RankingOutcome target = target_of(inst, w);
    IcaConfig config;
    config.seed = static_cast<std::uint64_t>(seed);
    tau += kendall_tau(ica_topsis(DecisionMatrix::from_values(inst.observed), w, config).outcome.order,
                       target.order);
  }
  EXPECT_GE(tau / seeds, 0.95);
}

TEST(IcaTopsis, SingleCriterionMatchesTopsis) {
  Matrix v(1, 20);
  for (Index j = 0; j < 20; ++j) v(0, j) = 0.37 * static_cast<double>((j * 7) % 20) + 0.1;
  const DecisionMatrix dm = DecisionMatrix::from_values(v);
  const WeightVector w{{1.0}};
  IcaConfig config;
  const PipelineResult r = ica_topsis(dm, w, config);
  EXPECT_EQ(r.outcome.order, topsis_rank(dm, w).outcome.order);
}

TEST(IcaTopsis, PositiveScalingOfAdjustedLatentsLeavesRankingUnchanged) {
  const MixingInstance inst = make_instance(make_mixing_2x2(kAlpha, kBeta), 150, std::nullopt, 321);
  IcaConfig config;
  config.seed = 9;
  const SeparationResult sep = jade(inst.observed, config);
  const WeightVector w = WeightVector::equal(2);
  const auto base = topsis_rank(DecisionMatrix::from_values(sep.l_adj), w);
  const auto scaled = topsis_rank(DecisionMatrix::from_values(4.0 * sep.l_adj), w);
  EXPECT_EQ(base.outcome.closeness, scaled.outcome.closeness);
  EXPECT_EQ(base.outcome.order, scaled.outcome.order);
}

TEST(IcaTopsisM, TransformedIdealsLandCloserToTargetThanExtractedOnes) {
  // Ideal alternatives mapped from the estimated latents end up closer (in
  // normalized mixed space) to the transformed true ideals than the ones
  // extracted directly from the mixed data.
  const int seeds = 100;
  double est_gap = 0.0, extracted_gap = 0.0;
  const WeightVector w = WeightVector::equal(2);
  for (int seed = 0; seed < seeds; ++seed) {
    const MixingInstance inst = make_instance(make_mixing_2x2(kAlpha, kBeta), 200, std::nullopt,
                                              2000 + static_cast<std::uint64_t>(seed));
    const Vector denom = normalization_denominators(inst.observed);
    const Vector target_pia =
        (inst.mixing * inst.latents.rowwise().maxCoeff()).cwiseQuotient(denom);
    const Vector target_nia =
        (inst.mixing * inst.latents.rowwise().minCoeff()).cwiseQuotient(denom);

    IcaConfig config;
    config.seed = static_cast<std::uint64_t>(seed);
    const SeparationResult sep = jade(inst.observed, config);
    const Vector est_pia = (sep.a_adj * sep.l_adj.rowwise().maxCoeff()).cwiseQuotient(denom);
    const Vector est_nia = (sep.a_adj * sep.l_adj.rowwise().minCoeff()).cwiseQuotient(denom);
    est_gap += (est_pia - target_pia).norm() + (est_nia - target_nia).norm();

    const Matrix u = vector_normalize(DecisionMatrix::from_values(inst.observed));
    const IdealPair extracted = extract_ideals(u, IdealSpace::normalized);
    extracted_gap += (extracted.pia - target_pia).norm() + (extracted.nia - target_nia).norm();
  }
  EXPECT_LT(est_gap / seeds, extracted_gap / seeds);
}

TEST(IcaTopsisM, BeatsPlainTopsisMOnAverage) {
  const int seeds = 100;
  double tau_itm = 0.0, tau_tm = 0.0;
  const WeightVector w = WeightVector::equal(2);
  for (int seed = 0; seed < seeds; ++seed) {
    const MixingInstance inst = make_instance(make_mixing_2x2(kAlpha, kBeta), 200, std::nullopt,
                                              3000 + static_cast<std::uint64_t>(seed));
    const RankingOutcome target = target_of(inst, w);
    const DecisionMatrix dm = DecisionMatrix::from_values(inst.observed);
    IcaConfig config;
    config.seed = static_cast<std::uint64_t>(seed);
    tau_itm += kendall_tau(ica_topsis_m(dm, w, config).outcome.order, target.order);
    tau_tm += kendall_tau(topsis_m_rank(dm, w).outcome.order, target.order);
  }
  EXPECT_GT(tau_itm / seeds, tau_tm / seeds);
}

TEST(IcaTopsisM, IdentityMixingStaysCloseToTopsisM) {
  const int seeds = 50;
  double tau = 0.0;
  const WeightVector w = WeightVector::equal(2);
  for (int seed = 0; seed < seeds; ++seed) {
    const MixingInstance inst = make_instance(Matrix::Identity(2, 2), 200, std::nullopt,
                                              4000 + static_cast<std::uint64_t>(seed));
    const DecisionMatrix dm = DecisionMatrix::from_values(inst.observed);
    IcaConfig config;
    config.seed = static_cast<std::uint64_t>(seed);
    tau += kendall_tau(ica_topsis_m(dm, w, config).outcome.order,
                       topsis_m_rank(dm, w).outcome.order);
  }
  EXPECT_GE(tau / seeds, 0.95);
}

TEST(UtopicPipeline, NoiselessIcaTopsisReproducesTargetExactly) {
  const WeightVector w = WeightVector::equal(2);
  for (int seed = 0; seed < 20; ++seed) {
    const MixingInstance inst = make_instance(2, 100, std::nullopt,
                                              6000 + static_cast<std::uint64_t>(seed));
    const RankingOutcome target = target_of(inst, w);
    const RankingOutcome utopic = utopic_pipeline(inst, w, PipelineKind::ica_topsis);
    EXPECT_DOUBLE_EQ(kendall_tau(utopic.order, target.order), 1.0);
  }
}

TEST(UtopicPipeline, NoisyBoundDominatesEstimatedPipelines) {
  // At SNR = 10 dB the bound is below 1 but still at least as good as the
  // estimated pipelines on average.
  const int seeds = 50;
  double tau_utopic = 0.0, tau_est = 0.0, tau_est_m = 0.0;
  const WeightVector w = WeightVector::equal(2);
  for (int seed = 0; seed < seeds; ++seed) {
    const MixingInstance inst =
        make_instance(2, 100, 10.0, 7000 + static_cast<std::uint64_t>(seed));
    const RankingOutcome target = target_of(inst, w);
    const DecisionMatrix dm = DecisionMatrix::from_values(inst.observed);
    IcaConfig config;
    config.seed = static_cast<std::uint64_t>(seed);
    tau_utopic += kendall_tau(utopic_pipeline(inst, w, PipelineKind::ica_topsis).order, target.order);
    tau_est += kendall_tau(ica_topsis(dm, w, config).outcome.order, target.order);
    tau_est_m += kendall_tau(ica_topsis_m(dm, w, config).outcome.order, target.order);
  }
  EXPECT_LT(tau_utopic / seeds, 1.0);
  EXPECT_GE(tau_utopic / seeds, tau_est / seeds);
  EXPECT_GE(tau_utopic / seeds, tau_est_m / seeds);
}

TEST(UtopicPipeline, NoiselessMahalanobisVariantTracksTargetClosely) {
  // The Mahalanobis variant measures distances with the sampled covariance,
  // so even under perfect separation its ranking is near, not equal to, the
  // target (verified: mean tau 0.977, min 0.925 over these seeds).
  const int seeds = 100;
  double mean = 0.0, worst = 1.0;
  const WeightVector w = WeightVector::equal(2);
  for (int seed = 0; seed < seeds; ++seed) {
    const MixingInstance inst = make_instance(make_mixing_2x2(kAlpha, kBeta), 200, std::nullopt,
                                              3000 + static_cast<std::uint64_t>(seed));
    const double tau =
        kendall_tau(utopic_pipeline(inst, w, PipelineKind::ica_topsis_m).order,
                    target_of(inst, w).order);
    mean += tau;
    worst = std::min(worst, tau);
  }
  EXPECT_GE(mean / seeds, 0.95);
  EXPECT_GE(worst, 0.90);
}

TEST(UtopicPipeline, SingularMixingIsRejected) {
  MixingInstance inst = make_instance(2, 50, std::nullopt, 8100);
  inst.mixing << 1, 1, 1, 1;
  EXPECT_THROW(utopic_pipeline(inst, WeightVector::equal(2), PipelineKind::ica_topsis),
               ValidationError);
}

TEST(Pipelines, CriterionPermutationPreservesClosenessMultisetInUtopicMode) {
  const WeightVector w = WeightVector::equal(3);
  const MixingInstance inst = make_instance(3, 80, std::nullopt, 8200);
  const RankingOutcome base = utopic_pipeline(inst, w, PipelineKind::ica_topsis);
  MixingInstance permuted = inst;
  const std::vector<Index> perm{2, 0, 1};
  for (Index i = 0; i < 3; ++i) {
    permuted.mixing.row(i) = inst.mixing.row(perm[static_cast<std::size_t>(i)]);
    permuted.observed.row(i) = inst.observed.row(perm[static_cast<std::size_t>(i)]);
    permuted.noise.row(i) = inst.noise.row(perm[static_cast<std::size_t>(i)]);
  }
  const RankingOutcome after = utopic_pipeline(permuted, w, PipelineKind::ica_topsis);
  EXPECT_LT((base.closeness - after.closeness).cwiseAbs().maxCoeff(), 1e-10);
}

}  // namespace
