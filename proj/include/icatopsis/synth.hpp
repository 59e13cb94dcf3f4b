// Synthetic instance generation: uniform latent criteria, parameterized
// mixing matrices, additive white Gaussian noise at an exact target SNR.
#pragma once

#include "icatopsis/core.hpp"

namespace icatopsis {

/// N x K matrix of i.i.d. uniform[0,1] draws from a seeded generator.
inline Matrix generate_latents(Index n, Index k, std::uint64_t seed) {
  if (n < 1 || k < 2) throw ValidationError("synth: latents need N >= 1, K >= 2");
  RandomEngine rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix l(n, k);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < k; ++j) l(i, j) = unif(rng);
  return l;
}

/// [[1, alpha], [beta, 1]]. Off-diagonal magnitudes above 0.75 leave the
/// diagonally dominant regime the ambiguity adjustment relies on; when
/// `warning` is given it is set instead of rejecting such inputs.
inline Matrix make_mixing_2x2(double alpha, double beta, std::string* warning = nullptr) {
  if (warning && (std::abs(alpha) > 0.75 || std::abs(beta) > 0.75))
    *warning = "synth: off-diagonal magnitude above 0.75 leaves the diagonally dominant regime";
  Matrix a(2, 2);
  a << 1.0, alpha, beta, 1.0;
  return a;
}

/// M x M mixing matrix with unit diagonal and i.i.d. uniform[lo, hi]
/// off-diagonal entries; draws with condition number above 1e6 are
/// rejection-resampled (at most 100 attempts).
inline Matrix make_mixing_random(Index m, std::uint64_t seed, double lo = -0.75,
                                 double hi = 0.75) {
  if (m < 1) throw ValidationError("synth: mixing matrix needs M >= 1");
  if (!(lo <= hi) || hi >= 1.0)
    throw ValidationError("synth: off-diagonal range must satisfy lo <= hi < 1");
  RandomEngine rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix a = Matrix::Identity(m, m);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j)
        if (i != j) a(i, j) = unif(rng);
    Eigen::JacobiSVD<Matrix> svd(a);
    const double cond = svd.singularValues()(0) / svd.singularValues()(m - 1);
    if (std::isfinite(cond) && cond <= 1e6) return a;
  }
  throw Error("synth: could not draw a well-conditioned mixing matrix in 100 attempts");
}

struct NoisyMix {
  Matrix observed;
  Matrix noise;
};

/// Adds zero-mean Gaussian noise scaled so the realized per-instance SNR
/// equals snr_db exactly (powers as mean squared entries). The returned noise
/// is re-derived as observed - signal so that the additive identity holds
/// bit-exactly on readback.
inline NoisyMix add_noise_at_snr(const Matrix& signal, double snr_db, std::uint64_t seed) {
  const double p_signal = signal.array().square().mean();
  if (p_signal == 0.0) throw ValidationError("synth: cannot scale noise against a zero signal");
  RandomEngine rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(signal.rows(), signal.cols());
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) g(i, j) = gauss(rng);
  const double p_raw = g.array().square().mean();
  const double p_target = p_signal / std::pow(10.0, snr_db / 10.0);
  g *= std::sqrt(p_target / p_raw);
  NoisyMix out;
  out.observed = signal + g;
  out.noise = out.observed - signal;
  return out;
}

/// Builds a full instance from an explicit mixing matrix. snr_db = nullopt
/// means noiseless. Sub-streams (latents, noise) are derived from `seed`, so
/// regeneration from the stored seed is bit-identical.
inline MixingInstance make_instance(Matrix mixing, Index k,
                                    std::optional<double> snr_db, std::uint64_t seed) {
  const Index n = mixing.cols();
  MixingInstance inst;
  inst.seed = seed;
  inst.mixing = std::move(mixing);
  inst.latents = generate_latents(n, k, detail::derive_seed(seed, 0));
  const Matrix signal = inst.mixing * inst.latents;
  if (snr_db) {
    NoisyMix mixed = add_noise_at_snr(signal, *snr_db, detail::derive_seed(seed, 1));
    inst.observed = std::move(mixed.observed);
    inst.noise = std::move(mixed.noise);
    inst.snr_db = snr_db;
  } else {
    inst.observed = signal;
    inst.noise = Matrix::Zero(signal.rows(), signal.cols());
  }
  return inst;
}

/// Random-mixing variant (unit diagonal, uniform off-diagonal entries).
inline MixingInstance make_instance(Index m, Index k, std::optional<double> snr_db,
                                    std::uint64_t seed) {
  return make_instance(make_mixing_random(m, detail::derive_seed(seed, 2)), k, snr_db, seed);
}

}  // namespace icatopsis
