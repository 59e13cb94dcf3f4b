// Resolution of the permutation and sign ambiguities left by blind source
// separation, assuming each latent criterion has a positive majority
// influence on the observed criterion of the same index (diagonally dominant
// mixing with positive diagonal). Positive scaling is intentionally left
// alone; the TOPSIS normalization step absorbs it.
#pragma once

#include "icatopsis/core.hpp"

namespace icatopsis {

struct PermutationAdjustment {
  Matrix a;                       // columns reordered
  Matrix l;                       // rows reordered to match
  std::vector<int> permutation;   // permutation[m] = original column now at m
};

struct SignAdjustment {
  Matrix a;
  Matrix l;
  std::vector<int> signs;  // +-1 applied to each column of a / row of l
};

namespace detail {

inline std::vector<int> optimal_assignment(const Matrix& a) {
  const Index m = a.rows();
  if (m > 10)
    throw ValidationError("ambiguity: optimal assignment mode supports at most 10 criteria");
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_score = -1.0;
  do {
    double score = 0.0;
    for (Index row = 0; row < m; ++row) score += std::abs(a(row, perm[static_cast<std::size_t>(row)]));
    if (score > best_score) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

/// Reorders the columns of a_hat (and the matching rows of l_hat) so each row
/// m keeps its largest-magnitude coefficient on the diagonal: row by row, the
/// not-yet-assigned column with the greatest absolute value in that row is
/// swapped into place. The product a * l is preserved by construction.
/// `optimal` switches to the assignment maximizing the total diagonal
/// magnitude instead of the greedy row order.
inline PermutationAdjustment adjust_permutation(const Matrix& a_hat, const Matrix& l_hat,
                                                bool optimal = false) {
  const Index m = a_hat.rows();
  if (a_hat.cols() != m)
    throw ValidationError("ambiguity: mixing matrix must be square in the determined case");
  if (l_hat.rows() != m)
    throw ValidationError("ambiguity: estimate rows must match mixing columns");

  PermutationAdjustment out;
  out.a = a_hat;
  out.l = l_hat;
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);

  if (optimal) {
    const std::vector<int> target = detail::optimal_assignment(a_hat);
    Matrix a(m, m), l(m, l_hat.cols());
    for (Index row = 0; row < m; ++row) {
      a.col(row) = a_hat.col(target[static_cast<std::size_t>(row)]);
      l.row(row) = l_hat.row(target[static_cast<std::size_t>(row)]);
    }
    out.a = std::move(a);
    out.l = std::move(l);
    out.permutation = target;
    return out;
  }

  for (Index row = 0; row < m; ++row) {
    Index pick = row;
    double best = std::abs(out.a(row, row));
    for (Index col = row + 1; col < m; ++col) {
      if (std::abs(out.a(row, col)) > best) {
        best = std::abs(out.a(row, col));
        pick = col;
      }
    }
    if (pick != row) {
      out.a.col(row).swap(out.a.col(pick));
      out.l.row(row).swap(out.l.row(pick));
      std::swap(perm[static_cast<std::size_t>(row)], perm[static_cast<std::size_t>(pick)]);
    }
  }
  out.permutation = std::move(perm);
  return out;
}

/// Negates every column of a (and the matching row of l) whose diagonal entry
/// is negative, so all diagonal entries end up positive. A zero diagonal
/// leaves the sign undefined and is an error.
inline SignAdjustment adjust_signs(const Matrix& a_adj_p, const Matrix& l_adj_p) {
  const Index m = a_adj_p.rows();
  if (a_adj_p.cols() != m || l_adj_p.rows() != m)
    throw ValidationError("ambiguity: sign adjustment operand size mismatch");
  SignAdjustment out;
  out.a = a_adj_p;
  out.l = l_adj_p;
  out.signs.assign(static_cast<std::size_t>(m), 1);
  for (Index col = 0; col < m; ++col) {
    const double diag = out.a(col, col);
    if (diag == 0.0)
      throw AmbiguityError("ambiguity: diagonal entry " + std::to_string(col + 1) +
                           " is exactly zero, sign undefined");
    if (diag < 0.0) {
      out.a.col(col) = -out.a.col(col);
      out.l.row(col) = -out.l.row(col);
      out.signs[static_cast<std::size_t>(col)] = -1;
    }
  }
  return out;
}

/// Fills the adjusted fields of a separation result from its raw estimates.
inline void apply_adjustments(SeparationResult& result, bool optimal = false) {
  PermutationAdjustment p = adjust_permutation(result.a_hat, result.l_hat, optimal);
  SignAdjustment s = adjust_signs(p.a, p.l);
  result.a_adj = std::move(s.a);
  result.l_adj = std::move(s.l);
  result.permutation = std::move(p.permutation);
  result.signs = std::move(s.signs);
}

}  // namespace icatopsis
