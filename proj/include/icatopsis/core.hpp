// Domain types and validation shared by every ranking method.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace icatopsis {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using RandomEngine = std::mt19937_64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A criterion row is unusable (e.g. all-zero, so vector normalization is undefined).
class DegenerateCriterionError : public Error {
 public:
  using Error::Error;
};

class SingularCovarianceError : public Error {
 public:
  using Error::Error;
};

class AmbiguityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Iterative source extraction did not converge. Carries the best separating
/// matrix found so far (possibly with fewer rows than requested).
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Matrix best_b)
      : Error(what), best_b(std::move(best_b)) {}
  Matrix best_b;
};

/// Decision data: M criteria (rows) x K alternatives (columns). All criteria
/// are benefit-type ("the larger the better"); cost criteria must be negated
/// or inverted by the caller before ingestion.
struct DecisionMatrix {
  Matrix values;
  std::vector<std::string> criterion_ids;
  std::vector<std::string> alternative_ids;

  Index criteria() const { return values.rows(); }
  Index alternatives() const { return values.cols(); }

  /// Wraps a raw matrix with generated labels C1..CM / A1..AK.
  static DecisionMatrix from_values(Matrix v) {
    DecisionMatrix d;
    d.values = std::move(v);
    d.criterion_ids.reserve(static_cast<std::size_t>(d.values.rows()));
    for (Index m = 0; m < d.values.rows(); ++m)
      d.criterion_ids.push_back("C" + std::to_string(m + 1));
    d.alternative_ids.reserve(static_cast<std::size_t>(d.values.cols()));
    for (Index k = 0; k < d.values.cols(); ++k)
      d.alternative_ids.push_back("A" + std::to_string(k + 1));
    return d;
  }
};

/// Per-criterion importances, nonnegative and summing to 1.
struct WeightVector {
  std::vector<double> w;

  static WeightVector equal(std::size_t m) {
    return WeightVector{std::vector<double>(m, 1.0 / static_cast<double>(m))};
  }

  Vector as_vector() const {
    return Eigen::Map<const Vector>(w.data(), static_cast<Index>(w.size()));
  }

  bool all_equal(double tol = 1e-12) const {
    for (std::size_t i = 1; i < w.size(); ++i)
      if (std::abs(w[i] - w[0]) > tol) return false;
    return true;
  }
};

/// Which coordinate system a PIA/NIA pair lives in.
enum class IdealSpace { weighted_normalized, normalized, latent, mixed };

inline const char* to_string(IdealSpace s) {
  switch (s) {
    case IdealSpace::weighted_normalized: return "weighted-normalized";
    case IdealSpace::normalized: return "normalized";
    case IdealSpace::latent: return "latent";
    case IdealSpace::mixed: return "mixed";
  }
  return "?";
}

/// Positive and negative ideal alternatives.
struct IdealPair {
  Vector pia;
  Vector nia;
  IdealSpace space_tag = IdealSpace::weighted_normalized;
};

/// Closeness scores plus the total order they induce. `order` lists
/// alternative indices best-first; ties broken by ascending index.
struct RankingOutcome {
  Vector closeness;
  std::vector<int> order;
  IdealPair ideals;
  std::vector<std::string> warnings;
};

/// Synthetic ground truth: observed = mixing * latents + noise, exactly.
struct MixingInstance {
  Matrix latents;   // N x K
  Matrix mixing;    // M x N
  Matrix noise;     // M x K
  Matrix observed;  // M x K
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
};

/// Output of a source-separation run. `b` maps observed data to estimates
/// (l_hat = b * observed); a_adj/l_adj carry the permutation- and
/// sign-adjusted versions with every diagonal of a_adj positive.
struct SeparationResult {
  Matrix b;      // N x M
  Matrix a_hat;  // M x N, inverse of b
  Matrix l_hat;  // N x K
  Matrix a_adj;
  Matrix l_adj;
  std::vector<int> permutation;  // permutation[m] = source column now at m
  std::vector<int> signs;        // +-1 applied per column
  std::vector<std::string> warnings;
};

/// Stable descending sort of alternative indices by closeness.
inline std::vector<int> ranking_order(const Vector& closeness) {
  std::vector<int> order(static_cast<std::size_t>(closeness.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return closeness[a] > closeness[b]; });
  return order;
}

/// Checks matrix/weight compatibility: M >= 1, K >= 2, finite entries,
/// matching label and weight lengths, nonnegative weights summing to 1.
/// Entry coordinates in diagnostics are 1-based (criterion, alternative).
inline void validate_problem(const DecisionMatrix& matrix, const WeightVector& weights) {
  const Index m = matrix.values.rows();
  const Index k = matrix.values.cols();
  if (m < 1) throw ValidationError("core: decision matrix needs at least 1 criterion");
  if (k < 2)
    throw ValidationError("core: decision matrix needs at least 2 alternatives, got " +
                          std::to_string(k));
  if (!matrix.criterion_ids.empty() && static_cast<Index>(matrix.criterion_ids.size()) != m)
    throw ValidationError("core: criterion label count " +
                          std::to_string(matrix.criterion_ids.size()) +
                          " does not match " + std::to_string(m) + " rows");
  if (!matrix.alternative_ids.empty() &&
      static_cast<Index>(matrix.alternative_ids.size()) != k)
    throw ValidationError("core: alternative label count " +
                          std::to_string(matrix.alternative_ids.size()) +
                          " does not match " + std::to_string(k) + " columns");
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < k; ++j)
      if (!std::isfinite(matrix.values(i, j)))
        throw ValidationError("core: non-finite entry at (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ")");
  if (static_cast<Index>(weights.w.size()) != m)
    throw ValidationError("core: weight count " + std::to_string(weights.w.size()) +
                          " does not match " + std::to_string(m) + " criteria");
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.w.size(); ++i) {
    if (!std::isfinite(weights.w[i]) || weights.w[i] < 0.0)
      throw ValidationError("core: weight " + std::to_string(i + 1) + " is negative or non-finite");
    sum += weights.w[i];
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError("core: weights sum to " + std::to_string(sum) + ", expected 1");
}

namespace detail {

// splitmix64; used to derive independent sub-stream seeds from one base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

}  // namespace detail

}  // namespace icatopsis
