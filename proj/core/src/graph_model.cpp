#include "regspec/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "regspec/config.hpp"
#include "regspec/error.hpp"
#include "regspec/rng.hpp"

namespace regspec {
namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidArgument("edge probability outside [0, 1]: " + std::to_string(p));
}

}  // namespace

// ---------------------------------------------------------------------------
// ProbabilityMatrix

ProbabilityMatrix ProbabilityMatrix::block(std::vector<int> block_of,
                                           DenseMatrix block_probs) {
  const Index k = block_probs.rows();
  if (block_probs.cols() != k || k == 0)
    throw InvalidArgument("block probability matrix must be square and non-empty");
  for (Index r = 0; r < k; ++r)
    for (Index c = 0; c < k; ++c) {
      check_probability(block_probs(r, c));
      if (block_probs(r, c) != block_probs(c, r))
        throw InvalidArgument("block probability matrix must be symmetric");
    }
  ProbabilityMatrix p;
  p.n_ = static_cast<Index>(block_of.size());
  p.members_.assign(static_cast<std::size_t>(k), {});
  for (Index i = 0; i < p.n_; ++i) {
    const int c = block_of[static_cast<std::size_t>(i)];
    if (c < 0 || c >= k) throw InvalidArgument("block label out of range");
    p.members_[static_cast<std::size_t>(c)].push_back(static_cast<Vertex>(i));
  }
  p.block_of_ = std::move(block_of);
  p.block_probs_ = std::move(block_probs);
  return p;
}

ProbabilityMatrix ProbabilityMatrix::constant(Index n, double prob) {
  if (n <= 0) throw InvalidArgument("vertex count must be positive");
  DenseMatrix b(1, 1);
  b(0, 0) = prob;
  return block(std::vector<int>(static_cast<std::size_t>(n), 0), std::move(b));
}

ProbabilityMatrix ProbabilityMatrix::dense(DenseMatrix m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InvalidArgument("probability matrix must be square and non-empty");
  if (m.rows() > kMaxDense)
    throw InvalidArgument("dense probability matrices are limited to n <= 10000");
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i <= j; ++i) {
      check_probability(m(i, j));
      if (m(i, j) != m(j, i))
        throw InvalidArgument("probability matrix must be symmetric");
    }
  ProbabilityMatrix p;
  p.n_ = m.rows();
  p.dense_ = std::move(m);
  return p;
}

double ProbabilityMatrix::operator()(Index i, Index j) const {
  if (!is_block()) return dense_(i, j);
  return block_probs_(block_of_[static_cast<std::size_t>(i)],
                      block_of_[static_cast<std::size_t>(j)]);
}

double ProbabilityMatrix::max_entry() const {
  if (!is_block()) return dense_.maxCoeff();
  double best = 0.0;
  const Index k = block_probs_.rows();
  for (Index r = 0; r < k; ++r) {
    if (members_[static_cast<std::size_t>(r)].empty()) continue;
    for (Index c = 0; c < k; ++c)
      if (!members_[static_cast<std::size_t>(c)].empty())
        best = std::max(best, block_probs_(r, c));
  }
  return best;
}

Vector ProbabilityMatrix::column_sums() const {
  if (!is_block()) return dense_.colwise().sum().transpose();
  const Index k = block_probs_.rows();
  Vector sizes(k);
  for (Index c = 0; c < k; ++c)
    sizes(c) = static_cast<double>(members_[static_cast<std::size_t>(c)].size());
  const Vector per_block = block_probs_ * sizes;
  Vector out(n_);
  for (Index j = 0; j < n_; ++j) out(j) = per_block(block_of_[static_cast<std::size_t>(j)]);
  return out;
}

void ProbabilityMatrix::multiply(const Eigen::Ref<const Vector>& x,
                                 Eigen::Ref<Vector> y) const {
  if (!is_block()) {
    y.noalias() = dense_ * x;
    return;
  }
  const Index k = block_probs_.rows();
  Vector sums = Vector::Zero(k);
  for (Index i = 0; i < n_; ++i) sums(block_of_[static_cast<std::size_t>(i)]) += x(i);
  const Vector per_block = block_probs_ * sums;
  for (Index i = 0; i < n_; ++i) y(i) = per_block(block_of_[static_cast<std::size_t>(i)]);
}

DenseMatrix ProbabilityMatrix::to_dense() const {
  if (!is_block()) return dense_;
  if (n_ > kMaxDense)
    throw InvalidArgument("refusing to densify a probability matrix with n > 10000");
  DenseMatrix m(n_, n_);
  for (Index j = 0; j < n_; ++j)
    for (Index i = 0; i < n_; ++i) m(i, j) = (*this)(i, j);
  return m;
}

std::optional<TwoBlockSbm> ProbabilityMatrix::two_block_sbm() const {
  if (!is_block() || block_probs_.rows() != 2) return std::nullopt;
  if (members_[0].size() != members_[1].size()) return std::nullopt;
  if (block_probs_(0, 0) != block_probs_(1, 1)) return std::nullopt;
  const double n = static_cast<double>(n_);
  return TwoBlockSbm{block_probs_(0, 0) * n, block_probs_(0, 1) * n};
}

// ---------------------------------------------------------------------------
// SparseAdjacency

SparseAdjacency SparseAdjacency::from_edges(Index n,
                                            std::span<const IndexPair> edges) {
  if (n < 0) throw InvalidArgument("vertex count must be non-negative");
  if (n > std::numeric_limits<Vertex>::max())
    throw InvalidArgument("vertex count exceeds 32-bit vertex ids");
  SparseAdjacency a;
  a.n_ = n;
  std::vector<Index> count(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw InvalidArgument("edge endpoint out of range");
    ++count[static_cast<std::size_t>(i)];
    if (i != j) ++count[static_cast<std::size_t>(j)];
  }
  a.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i)
    a.offsets_[static_cast<std::size_t>(i) + 1] =
        a.offsets_[static_cast<std::size_t>(i)] + count[static_cast<std::size_t>(i)];
  a.neighbors_.resize(static_cast<std::size_t>(a.offsets_.back()));
  std::vector<Index> fill(a.offsets_.begin(), a.offsets_.end() - 1);
  for (const auto& [i, j] : edges) {
    a.neighbors_[static_cast<std::size_t>(fill[static_cast<std::size_t>(i)]++)] =
        static_cast<Vertex>(j);
    if (i != j)
      a.neighbors_[static_cast<std::size_t>(fill[static_cast<std::size_t>(j)]++)] =
          static_cast<Vertex>(i);
  }
  a.degrees_.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    auto first = a.neighbors_.begin() + a.offsets_[static_cast<std::size_t>(i)];
    auto last = a.neighbors_.begin() + a.offsets_[static_cast<std::size_t>(i) + 1];
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last)
      throw InvalidArgument("duplicate edge at vertex " + std::to_string(i));
    a.degrees_[static_cast<std::size_t>(i)] = last - first;
  }
  a.edge_count_ = static_cast<Index>(edges.size());
  return a;
}

bool SparseAdjacency::has_edge(Index i, Index j) const {
  const auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), static_cast<Vertex>(j));
}

void SparseAdjacency::multiply(const Eigen::Ref<const Vector>& x,
                               Eigen::Ref<Vector> y) const {
  const Vertex* nb = neighbors_.data();
  for (Index i = 0; i < n_; ++i) {
    double s = 0.0;
    const Index end = offsets_[static_cast<std::size_t>(i) + 1];
    for (Index p = offsets_[static_cast<std::size_t>(i)]; p < end; ++p) s += x(nb[p]);
    y(i) = s;
  }
}

IndexPairSet SparseAdjacency::edges() const {
  IndexPairSet out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (Index i = 0; i < n_; ++i)
    for (const Vertex j : neighbors(i))
      if (j >= i) out.emplace_back(i, j);
  return out;
}

DenseMatrix SparseAdjacency::to_dense() const {
  DenseMatrix m = DenseMatrix::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i)
    for (const Vertex j : neighbors(i)) m(i, j) = 1.0;
  return m;
}

// ---------------------------------------------------------------------------
// SBM construction and sampling

SbmConfig make_sbm_config(Index n, double a, double b,
                          std::optional<std::vector<Index>> permutation) {
  if (n <= 0 || n % 2 != 0)
    throw InvalidArgument("SBM vertex count must be positive and even");
  if (!(b >= 0.0) || !(a >= b))
    throw InvalidArgument("SBM requires a >= b >= 0 (assortative model)");
  if (a / static_cast<double>(n) > 1.0)
    throw InvalidArgument("SBM requires a / n <= 1");

  SbmConfig cfg{n, a, b, Labels(static_cast<std::size_t>(n))};
  for (Index i = 0; i < n; ++i)
    cfg.ground_truth[static_cast<std::size_t>(i)] = i < n / 2 ? 1 : 2;

  if (permutation) {
    const auto& perm = *permutation;
    if (static_cast<Index>(perm.size()) != n)
      throw InvalidArgument("permutation length must equal n");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    Labels permuted(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      const Index t = perm[static_cast<std::size_t>(i)];
      if (t < 0 || t >= n || seen[static_cast<std::size_t>(t)])
        throw InvalidArgument("permutation is not a bijection on [0, n)");
      seen[static_cast<std::size_t>(t)] = 1;
      permuted[static_cast<std::size_t>(t)] = cfg.ground_truth[static_cast<std::size_t>(i)];
    }
    cfg.ground_truth = std::move(permuted);
  }
  return cfg;
}

std::vector<Index> random_permutation(Index n, std::uint64_t seed) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  CounterRng rng(derive_seed(seed, 0x7065726d));
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

SbmConfig sbm_config_from(const KeyValueConfig& cfg) {
  const Index n = cfg.get_int("n");
  const double a = cfg.get_double("a");
  const double b = cfg.get_double("b");
  std::optional<std::vector<Index>> perm;
  if (cfg.contains("permutation")) {
    const auto& vals = cfg.values("permutation");
    if (vals.size() == 1 && vals.front() == "identity") {
      // default layout
    } else if (vals.size() == 1 && vals.front() == "random") {
      const std::uint64_t seed = cfg.contains("seed") ? cfg.get_u64("seed") : 0;
      perm = random_permutation(n, seed);
    } else {
      std::vector<Index> p;
      for (const auto& v : vals) p.push_back(parse_int(v));
      perm = std::move(p);
    }
  }
  return make_sbm_config(n, a, b, std::move(perm));
}

ProbabilityMatrix sbm_prob_matrix(const SbmConfig& cfg) {
  if (cfg.n <= 0 || cfg.n % 2 != 0)
    throw InvalidArgument("SBM vertex count must be positive and even");
  const double n = static_cast<double>(cfg.n);
  if (cfg.a / n > 1.0 || cfg.b / n > 1.0)
    throw InvalidArgument("SBM requires a / n <= 1 and b / n <= 1");
  if (static_cast<Index>(cfg.ground_truth.size()) != cfg.n)
    throw InvalidArgument("ground truth length must equal n");
  std::vector<int> block_of(cfg.ground_truth.size());
  Index ones = 0;
  for (std::size_t i = 0; i < block_of.size(); ++i) {
    const int c = cfg.ground_truth[i];
    if (c != 1 && c != 2) throw InvalidArgument("SBM labels must be 1 or 2");
    block_of[i] = c - 1;
    ones += c == 1;
  }
  if (2 * ones != cfg.n) throw InvalidArgument("SBM communities must have equal size");
  DenseMatrix b(2, 2);
  b << cfg.a / n, cfg.b / n, cfg.b / n, cfg.a / n;
  return ProbabilityMatrix::block(std::move(block_of), std::move(b));
}

SparseAdjacency sample_graph(const ProbabilityMatrix& p, std::uint64_t seed) {
  const Index n = p.size();
  IndexPairSet upper;
  std::vector<Vertex> row;

  for (Index i = 0; i < n; ++i) {
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    row.clear();
    if (p.is_block()) {
      const auto& members = p.block_members();
      const int bi = p.block_labels()[static_cast<std::size_t>(i)];
      for (std::size_t c = 0; c < members.size(); ++c) {
        const double prob = p.block_probabilities()(bi, static_cast<Index>(c));
        if (prob <= 0.0) continue;
        const auto& mem = members[c];
        const auto first = static_cast<Index>(
            std::lower_bound(mem.begin(), mem.end(), static_cast<Vertex>(i)) - mem.begin());
        const auto count = static_cast<Index>(mem.size());
        if (prob >= 1.0) {
          for (Index q = first; q < count; ++q) row.push_back(mem[static_cast<std::size_t>(q)]);
          continue;
        }
        // Geometric skipping: gaps between successes are Geometric(prob).
        const double log_q = std::log1p(-prob);
        Index pos = first - 1;
        while (true) {
          const double skip = std::floor(std::log(rng.uniform_open_low()) / log_q);
          if (skip >= static_cast<double>(count - pos)) break;
          pos += static_cast<Index>(skip) + 1;
          if (pos >= count) break;
          row.push_back(mem[static_cast<std::size_t>(pos)]);
        }
      }
      std::sort(row.begin(), row.end());
    } else {
      for (Index j = i; j < n; ++j)
        if (rng.uniform() < p(i, j)) row.push_back(static_cast<Vertex>(j));
    }
    for (const Vertex j : row) upper.emplace_back(i, j);
  }
  return SparseAdjacency::from_edges(n, upper);
}

ModelParams model_params(const ProbabilityMatrix& p) {
  const Vector sums = p.column_sums();
  const double d0 = sums.minCoeff();
  if (!(d0 > 0.0))
    throw ModelError("expected column sum is zero; d0 is undefined");
  const double d = static_cast<double>(p.size()) * p.max_entry();
  return ModelParams{d, d0, d / d0};
}

void write_edge_list(std::ostream& out, const SparseAdjacency& a) {
  for (const auto& [i, j] : a.edges()) out << i << ' ' << j << '\n';
}

SparseAdjacency read_edge_list(std::istream& in, Index n) {
  IndexPairSet edges;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    Index i = 0, j = 0;
    if (!(ls >> i)) continue;
    if (!(ls >> j)) throw InvalidArgument("malformed edge-list line: " + line);
    edges.emplace_back(std::min(i, j), std::max(i, j));
  }
  return SparseAdjacency::from_edges(n, edges);
}

}  // namespace regspec
