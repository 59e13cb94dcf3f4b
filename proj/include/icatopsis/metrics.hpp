// Ranking-comparison and signal metrics: Kendall tau, Pearson correlation of
// closeness vectors, top-segment mean absolute position error, SNR.
#pragma once

#include "icatopsis/core.hpp"

namespace icatopsis {

namespace detail {

inline void check_permutation(const std::vector<int>& order, const char* who) {
  std::vector<char> seen(order.size(), 0);
  for (int v : order) {
    if (v < 0 || v >= static_cast<int>(order.size()) || seen[static_cast<std::size_t>(v)])
      throw ValidationError(std::string("metrics: ") + who + " is not a permutation");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

// Inversion count by merge sort, O(K log K).
inline std::uint64_t count_inversions(std::vector<int>& seq, std::vector<int>& scratch,
                                      std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(seq, scratch, lo, mid) + count_inversions(seq, scratch, mid, hi);
  std::size_t i = lo, j = mid, out = lo;
  while (i < mid && j < hi) {
    if (seq[i] <= seq[j]) {
      scratch[out++] = seq[i++];
    } else {
      inv += mid - i;
      scratch[out++] = seq[j++];
    }
  }
  while (i < mid) scratch[out++] = seq[i++];
  while (j < hi) scratch[out++] = seq[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            seq.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

}  // namespace detail

/// tau = (J_conc - J_disc) / (K(K-1)/2) between two total orders over the
/// same K items (tau-a; upstream tie-breaking makes orders total). Both
/// arguments are item sequences, best first.
inline double kendall_tau(const std::vector<int>& rank_a, const std::vector<int>& rank_b) {
  if (rank_a.size() != rank_b.size())
    throw ValidationError("metrics: rankings have different lengths (" +
                          std::to_string(rank_a.size()) + " vs " + std::to_string(rank_b.size()) +
                          ")");
  const std::size_t k = rank_a.size();
  if (k < 2) throw ValidationError("metrics: kendall_tau needs at least 2 items");
  detail::check_permutation(rank_a, "first ranking");
  detail::check_permutation(rank_b, "second ranking");

  std::vector<int> pos_b(k);
  for (std::size_t i = 0; i < k; ++i) pos_b[static_cast<std::size_t>(rank_b[i])] = static_cast<int>(i);
  std::vector<int> seq(k);
  for (std::size_t i = 0; i < k; ++i) seq[i] = pos_b[static_cast<std::size_t>(rank_a[i])];

  std::vector<int> scratch(k);
  const std::uint64_t disc = detail::count_inversions(seq, scratch, 0, k);
  const double pairs = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
  return (pairs - 2.0 * static_cast<double>(disc)) / pairs;
}

/// Centered product-moment correlation between two closeness vectors.
inline double pearson_closeness(const Vector& r_est, const Vector& r_target) {
  if (r_est.size() != r_target.size())
    throw ValidationError("metrics: closeness vectors have different lengths");
  if (r_est.size() < 2) throw ValidationError("metrics: pearson needs at least 2 entries");
  const Vector a = r_est.array() - r_est.mean();
  const Vector b = r_target.array() - r_target.mean();
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0)
    throw ValidationError("metrics: correlation undefined for a constant closeness vector");
  return a.dot(b) / (na * nb);
}

/// Mean absolute position error of the top floor(fraction*K) alternatives of
/// the target ranking: (1/s) * sum_{k=1..s} |o_k - k|, where o_k is the
/// 1-based position, in the estimated ranking, of the alternative at target
/// position k.
inline double top_segment_mae(const std::vector<int>& order_est,
                              const std::vector<int>& order_target, double fraction = 0.2) {
  if (order_est.size() != order_target.size())
    throw ValidationError("metrics: rankings have different lengths");
  detail::check_permutation(order_est, "estimated ranking");
  detail::check_permutation(order_target, "target ranking");
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ValidationError("metrics: fraction must be in (0, 1]");
  const std::size_t k = order_est.size();
  const auto segment =
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(k) + 1e-9));
  if (segment < 1) throw ValidationError("metrics: top segment is empty at this fraction");

  std::vector<int> pos_est(k);
  for (std::size_t i = 0; i < k; ++i)
    pos_est[static_cast<std::size_t>(order_est[i])] = static_cast<int>(i) + 1;
  double total = 0.0;
  for (std::size_t i = 0; i < segment; ++i) {
    const int target_pos = static_cast<int>(i) + 1;
    total += std::abs(pos_est[static_cast<std::size_t>(order_target[i])] - target_pos);
  }
  return total / static_cast<double>(segment);
}

/// 10*log10(P_signal / P_noise) with powers as mean squared entries.
/// Returns nullopt for all-zero noise (infinite SNR).
inline std::optional<double> measure_snr(const Matrix& signal, const Matrix& noise) {
  const double p_noise = noise.array().square().mean();
  if (p_noise == 0.0) return std::nullopt;
  const double p_signal = signal.array().square().mean();
  return 10.0 * std::log10(p_signal / p_noise);
}

}  // namespace icatopsis
