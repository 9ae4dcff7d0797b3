#pragma once

// Degree-trimmed cores, greedy sparse row/column peeling of index blocks,
// entrywise restriction and the closed-form residual bounds.

#include <optional>
#include <vector>

#include "regspec/graph_model.hpp"
#include "regspec/linear_operator.hpp"
#include "regspec/types.hpp"

namespace regspec {

struct CoreSet {
  std::vector<Index> core;              ///< J, ascending
  std::vector<Index> removed;           ///< complement of J, ascending
  std::vector<double> removed_deviation;///< |d_j - E d_j| for every removed j
  double threshold = 0.0;               ///< deviation cutoff used
  double budget = 0.0;                  ///< n / (2d)
};

/// J = { j : |d_j - sum_i p_ij| <= constant * r * sqrt(d log d) }, or the
/// explicit `threshold` when given. Requires r >= 1 and d > 1.
CoreSet degree_trim_core(const SparseAdjacency& a, const ProbabilityMatrix& p,
                         double r, double constant = 30.0,
                         std::optional<double> threshold = std::nullopt);

/// Split of a block I x J into a row-peeled part R and a column-peeled part C.
struct IndexDecomposition {
  std::vector<Index> rows;  ///< I
  std::vector<Index> cols;  ///< J
  IndexPairSet R;
  IndexPairSet C;
  Index threshold = 0;
  /// Largest number of ones of A in one row of A_R / one column of A_C.
  Index max_row_ones = 0;
  Index max_col_ones = 0;
  /// Largest number of index pairs in one row of R / one column of C.
  Index max_row_pairs = 0;
  Index max_col_pairs = 0;
  /// Number of peeled lines whose ones-count exceeded `threshold`.
  Index lines_over_threshold = 0;
};

/// ceil(10 r log d).
Index default_peel_threshold(double r, double d);

/// Greedy peeling: while the remaining block is non-empty, remove the row
/// (when rows >= cols) or column with the fewest ones inside the remaining
/// block, lowest index first on ties. Removed rows go to R, columns to C.
IndexDecomposition sparse_decompose(const SparseAdjacency& a,
                                    const std::vector<Index>& rows,
                                    const std::vector<Index>& cols,
                                    Index threshold);

/// Dense copy of `m` with every entry outside `s` set to zero.
DenseMatrix restrict(const DenseMatrix& m, const IndexPairSet& s);

/// All pairs of the block I x J, row-major.
IndexPairSet block_pairs(const std::vector<Index>& rows, const std::vector<Index>& cols);

/// `op` restricted to the block I x J, embedded at the original indices.
/// Holds a reference to `op`.
BlockRestriction restrict(const LinearOperator& op, const std::vector<Index>& rows,
                          const std::vector<Index>& cols);

struct RestrictionCheck {
  double eps = 0.0;  ///< max_i (row sum of B_S)_i / (row sum of B)_i
  double lhs = 0.0;  ///< ||(L(B))_S||
  bool holds = false;
};

/// Compares ||(L(B))_S|| with sqrt(eps) on a dense symmetric nonnegative B
/// (n <= 512). Throws on a zero row sum.
RestrictionCheck restriction_bound_check(const DenseMatrix& b, const IndexPairSet& s);

/// 2/sqrt(d) + sqrt(40 r log d)/sqrt(n tau).
double residual_norm_bound(double d, double r, Index n, double tau);

/// 2/sqrt(d) + 2/sqrt(n tau).
double expected_residual_bound(double d, Index n, double tau);

/// Indices of the `count` largest-degree vertices (lower index first on
/// ties), returned ascending.
std::vector<Index> top_degree_vertices(const SparseAdjacency& a, Index count);

}  // namespace regspec
