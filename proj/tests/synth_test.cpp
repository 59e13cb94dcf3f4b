#include "icatopsis/synth.hpp"

#include "icatopsis/metrics.hpp"

#include <gtest/gtest.h>

using namespace icatopsis;

namespace {

TEST(GenerateLatents, EntriesInUnitInterval) {
  const Matrix l = generate_latents(3, 500, 1);
  EXPECT_GE(l.minCoeff(), 0.0);
  EXPECT_LE(l.maxCoeff(), 1.0);
}

TEST(GenerateLatents, MeanApproachesHalf) {
  const Matrix l = generate_latents(2, 5000, 2);  // 10^4 draws
  EXPECT_NEAR(l.mean(), 0.5, 0.02);
}

TEST(GenerateLatents, FixedSeedReproduces) {
  EXPECT_EQ(generate_latents(4, 100, 77), generate_latents(4, 100, 77));
  EXPECT_NE(generate_latents(4, 100, 77), generate_latents(4, 100, 78));
}

TEST(GenerateLatents, RejectsDegenerateShapes) {
  EXPECT_THROW(generate_latents(0, 10, 1), ValidationError);
  EXPECT_THROW(generate_latents(2, 1, 1), ValidationError);
}

TEST(MakeMixing2x2, GraphicalExampleMatrix) {
  const Matrix a = make_mixing_2x2(0.7, -0.25);
  Matrix expected(2, 2);
  expected << 1.0, 0.7, -0.25, 1.0;
  EXPECT_EQ(a, expected);
}

TEST(MakeMixing2x2, ZeroOffDiagonalsGiveIdentity) {
  EXPECT_EQ(make_mixing_2x2(0.0, 0.0), Matrix::Identity(2, 2));
}

TEST(MakeMixing2x2, ExtremeRegimeStaysInvertible) {
  const Matrix a = make_mixing_2x2(0.75, 0.75);
  EXPECT_DOUBLE_EQ(a.determinant(), 0.4375);
}

TEST(MakeMixing2x2, WarnsOutsideDominantRegime) {
  std::string warning;
  make_mixing_2x2(0.9, 0.1, &warning);
  EXPECT_FALSE(warning.empty());
  warning.clear();
  make_mixing_2x2(0.75, -0.75, &warning);
  EXPECT_TRUE(warning.empty());
}

TEST(MakeMixingRandom, UnitDiagonalAndBoundedOffDiagonals) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Matrix a = make_mixing_random(5, seed);
    for (Index i = 0; i < 5; ++i) {
      EXPECT_DOUBLE_EQ(a(i, i), 1.0);
      for (Index j = 0; j < 5; ++j)
        if (i != j) EXPECT_LE(std::abs(a(i, j)), 0.75);
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    EXPECT_LE(svd.singularValues()(0) / svd.singularValues()(4), 1e6);
  }
}

TEST(MakeMixingRandom, TwoCriteriaSpecializesTheParametricForm) {
  const Matrix a = make_mixing_random(2, 5);
  EXPECT_EQ(a, make_mixing_2x2(a(0, 1), a(1, 0)));
}

TEST(MakeMixingRandom, RejectsBadRanges) {
  EXPECT_THROW(make_mixing_random(3, 1, -0.5, 1.0), ValidationError);
  EXPECT_THROW(make_mixing_random(3, 1, 0.5, 0.2), ValidationError);
}

TEST(AddNoiseAtSnr, RealizedRatioIsExact) {
  const Matrix signal = generate_latents(2, 400, 9);
  const NoisyMix mix = add_noise_at_snr(signal, 10.0, 10);
  const double p_signal = signal.array().square().mean();
  const double p_noise = mix.noise.array().square().mean();
  EXPECT_NEAR(p_signal / p_noise, 10.0, 1e-9);
  EXPECT_NEAR(*measure_snr(signal, mix.noise), 10.0, 1e-9);
}

TEST(AddNoiseAtSnr, AdditiveIdentityHoldsBitExactly) {
  const Matrix signal = generate_latents(3, 300, 11);
  const NoisyMix mix = add_noise_at_snr(signal, 25.0, 12);
  EXPECT_EQ(Matrix(mix.observed - signal), mix.noise);
}

TEST(MakeInstance, NoiselessHasZeroNoise) {
  const MixingInstance inst = make_instance(2, 50, std::nullopt, 13);
  EXPECT_EQ(inst.noise, Matrix::Zero(2, 50));
  EXPECT_EQ(inst.observed, Matrix(inst.mixing * inst.latents));
  EXPECT_FALSE(inst.snr_db.has_value());
}

TEST(MakeInstance, NoiseRecoverableBitExactly) {
  const MixingInstance inst = make_instance(3, 120, 20.0, 14);
  EXPECT_EQ(Matrix(inst.observed - inst.mixing * inst.latents), inst.noise);
  EXPECT_NEAR(*measure_snr(inst.mixing * inst.latents, inst.noise), 20.0, 0.1);
}

TEST(MakeInstance, RegenerationFromStoredSeedIsBitIdentical) {
  const MixingInstance a = make_instance(4, 60, 35.0, 15);
  const MixingInstance b = make_instance(4, 60, 35.0, a.seed);
  EXPECT_EQ(a.latents, b.latents);
  EXPECT_EQ(a.mixing, b.mixing);
  EXPECT_EQ(a.noise, b.noise);
  EXPECT_EQ(a.observed, b.observed);
}

TEST(MakeInstance, MixedRowsAreCorrelated) {
  // Noiseless 2x2 family: the observed rows pick up correlation from the
  // mixing whenever the net off-diagonal contribution alpha + beta is
  // bounded away from zero. (At alpha = -beta the contributions cancel.)
  for (auto [alpha, beta] : std::vector<std::pair<double, double>>{
           {0.3, 0.0}, {0.15, 0.15}, {-0.5, 0.2}, {0.75, 0.75}}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const MixingInstance inst =
          make_instance(make_mixing_2x2(alpha, beta), 1000, std::nullopt, 50 + seed);
      const double rho = pearson_closeness(inst.observed.row(0).transpose(),
                                           inst.observed.row(1).transpose());
      EXPECT_GT(std::abs(rho), 0.1) << "alpha=" << alpha << " beta=" << beta;
    }
  }
}

}  // namespace
