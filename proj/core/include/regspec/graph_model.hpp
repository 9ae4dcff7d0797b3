#pragma once

// Inhomogeneous Erdos-Renyi and two-block stochastic block models: expected
// adjacency matrices, seeded sampling and the derived model parameters.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regspec/types.hpp"

namespace regspec {

class KeyValueConfig;

/// Model parameters of an expected adjacency matrix P:
///   d     = max_ij n p_ij
///   d0    = min_j sum_i p_ij
///   alpha = d / d0
struct ModelParams {
  double d = 0.0;
  double d0 = 0.0;
  double alpha = 0.0;
};

/// Parameters of a balanced two-block SBM recovered from a ProbabilityMatrix.
struct TwoBlockSbm {
  double a = 0.0;  ///< within-community rate, p = a / n
  double b = 0.0;  ///< between-community rate, q = b / n
};

/// Symmetric matrix of edge probabilities.
///
/// Two storage forms: a block form (every vertex carries a block label and
/// p_ij depends only on the label pair) which covers ER and SBM models at any
/// n, and a dense form limited to n <= kMaxDense.
class ProbabilityMatrix {
 public:
  static constexpr Index kMaxDense = 10'000;

  /// Block form. `block_of[i]` in [0, K), `block_probs` is K x K symmetric.
  static ProbabilityMatrix block(std::vector<int> block_of,
                                 DenseMatrix block_probs);
  /// Homogeneous model p_ij = p.
  static ProbabilityMatrix constant(Index n, double p);
  /// Dense form; entries checked for symmetry and range.
  static ProbabilityMatrix dense(DenseMatrix p);

  Index size() const noexcept { return n_; }
  bool is_block() const noexcept { return dense_.size() == 0; }

  double operator()(Index i, Index j) const;
  double max_entry() const;
  Vector column_sums() const;

  /// y = P x, O(nK) in block form.
  void multiply(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> y) const;

  DenseMatrix to_dense() const;

  /// Block form only.
  const std::vector<int>& block_labels() const { return block_of_; }
  const DenseMatrix& block_probabilities() const { return block_probs_; }
  /// Sorted members of every block.
  const std::vector<std::vector<Vertex>>& block_members() const {
    return members_;
  }

  /// Returns (a, b) when this is a balanced two-block model with equal
  /// within-block probabilities, otherwise nullopt.
  std::optional<TwoBlockSbm> two_block_sbm() const;

 private:
  ProbabilityMatrix() = default;

  Index n_ = 0;
  std::vector<int> block_of_;
  DenseMatrix block_probs_;
  std::vector<std::vector<Vertex>> members_;
  DenseMatrix dense_;
};

/// Symmetric binary adjacency matrix in CSR form. A loop (i, i) is stored once
/// in row i and contributes 1 to d_i, so d_i = sum_j A_ij literally.
class SparseAdjacency {
 public:
  SparseAdjacency() = default;

  /// Builds from undirected edges; each pair may be given in either
  /// orientation but at most once. Throws on out-of-range or duplicate pairs.
  static SparseAdjacency from_edges(Index n, std::span<const IndexPair> edges);

  Index size() const noexcept { return n_; }
  /// Number of stored entries (2 per off-diagonal edge, 1 per loop).
  Index nnz() const noexcept { return static_cast<Index>(neighbors_.size()); }
  Index edge_count() const noexcept { return edge_count_; }

  std::span<const Vertex> neighbors(Index i) const {
    return {neighbors_.data() + offsets_[i],
            static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
  }
  Index degree(Index i) const { return offsets_[i + 1] - offsets_[i]; }
  const std::vector<Index>& degrees() const noexcept { return degrees_; }
  bool has_edge(Index i, Index j) const;

  /// y = A x.
  void multiply(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> y) const;

  /// Upper-triangle edge list (i <= j), row-major order.
  IndexPairSet edges() const;

  DenseMatrix to_dense() const;

  friend bool operator==(const SparseAdjacency&, const SparseAdjacency&) = default;

 private:
  Index n_ = 0;
  Index edge_count_ = 0;
  std::vector<Index> offsets_{0};
  std::vector<Vertex> neighbors_;
  std::vector<Index> degrees_;
};

/// Balanced planted-partition model G(n, a/n, b/n).
struct SbmConfig {
  Index n = 0;
  double a = 0.0;
  double b = 0.0;
  Labels ground_truth;  ///< values in {1, 2}
};

/// Builds an SbmConfig. Without a permutation the first n/2 vertices are
/// community 1. With one, vertex permutation[i] receives the label that
/// position i has in the unpermuted layout.
SbmConfig make_sbm_config(Index n, double a, double b,
                          std::optional<std::vector<Index>> permutation = {});

/// Uniformly random permutation of [0, n) (Fisher-Yates on a CounterRng).
std::vector<Index> random_permutation(Index n, std::uint64_t seed);

/// Reads n, a, b and optional permutation (identity | random | list) from a
/// key-value config. `seed` is used for `permutation = random`.
SbmConfig sbm_config_from(const KeyValueConfig& cfg);

/// Expected adjacency of the SBM: a/n within communities (diagonal included),
/// b/n across.
ProbabilityMatrix sbm_prob_matrix(const SbmConfig& cfg);

/// Samples A with independent Bernoulli(p_ij) entries on and above the
/// diagonal. Row i draws from its own counter stream keyed by (seed, i), so
/// the result is bit-identical for a given seed regardless of row order.
SparseAdjacency sample_graph(const ProbabilityMatrix& p, std::uint64_t seed);

/// Throws ModelError if some expected column sum is zero.
ModelParams model_params(const ProbabilityMatrix& p);

/// "i j" per line, 0-indexed, i <= j.
void write_edge_list(std::ostream& out, const SparseAdjacency& a);
SparseAdjacency read_edge_list(std::istream& in, Index n);

}  // namespace regspec
