#include "regspec/core_residual.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "regspec/error.hpp"
#include "regspec/norms_oracles.hpp"

namespace regspec {

CoreSet degree_trim_core(const SparseAdjacency& a, const ProbabilityMatrix& p,
                         double r, double constant, std::optional<double> threshold) {
  if (a.size() != p.size()) throw InvalidArgument("graph and model sizes differ");
  if (!(r >= 1.0)) throw InvalidArgument("degree_trim_core requires r >= 1");
  const ModelParams params = model_params(p);
  if (!(params.d > 1.0)) throw InvalidArgument("degree_trim_core requires d > 1");
  if (threshold && !(*threshold >= 0.0)) throw InvalidArgument("threshold must be >= 0");

  CoreSet out;
  out.threshold = threshold ? *threshold
                            : constant * r * std::sqrt(params.d * std::log(params.d));
  out.budget = static_cast<double>(a.size()) / (2.0 * params.d);
  const Vector expected = p.column_sums();
  for (Index j = 0; j < a.size(); ++j) {
    const double dev = std::abs(static_cast<double>(a.degree(j)) - expected(j));
    if (dev <= out.threshold) {
      out.core.push_back(j);
    } else {
      out.removed.push_back(j);
      out.removed_deviation.push_back(dev);
    }
  }
  return out;
}

Index default_peel_threshold(double r, double d) {
  if (!(r >= 1.0) || !(d >= 1.0)) throw InvalidArgument("peel threshold needs r >= 1, d >= 1");
  return static_cast<Index>(std::ceil(10.0 * r * std::log(d)));
}

namespace {

std::vector<Index> sorted_unique(const std::vector<Index>& v, Index n) {
  std::vector<Index> out = v;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!out.empty() && (out.front() < 0 || out.back() >= n))
    throw InvalidArgument("index set out of range");
  return out;
}

}  // namespace

IndexDecomposition sparse_decompose(const SparseAdjacency& a,
                                    const std::vector<Index>& rows,
                                    const std::vector<Index>& cols,
                                    Index threshold) {
  const Index n = a.size();
  IndexDecomposition out;
  out.rows = sorted_unique(rows, n);
  out.cols = sorted_unique(cols, n);
  out.threshold = threshold;

  std::vector<char> row_alive(static_cast<std::size_t>(n), 0), col_alive(static_cast<std::size_t>(n), 0);
  for (const Index i : out.rows) row_alive[static_cast<std::size_t>(i)] = 1;
  for (const Index j : out.cols) col_alive[static_cast<std::size_t>(j)] = 1;

  std::vector<Index> row_count(static_cast<std::size_t>(n), 0), col_count(static_cast<std::size_t>(n), 0);
  for (const Index i : out.rows)
    for (const Vertex j : a.neighbors(i))
      if (col_alive[static_cast<std::size_t>(j)]) {
        ++row_count[static_cast<std::size_t>(i)];
        ++col_count[static_cast<std::size_t>(j)];
      }

  // (count, index) buckets; begin() is the min-count line with lowest index.
  std::set<std::pair<Index, Index>> row_queue, col_queue;
  for (const Index i : out.rows) row_queue.emplace(row_count[static_cast<std::size_t>(i)], i);
  for (const Index j : out.cols) col_queue.emplace(col_count[static_cast<std::size_t>(j)], j);

  auto live_rows = static_cast<Index>(out.rows.size());
  auto live_cols = static_cast<Index>(out.cols.size());
  while (live_rows > 0 && live_cols > 0) {
    if (live_rows >= live_cols) {
      const auto [ones, i] = *row_queue.begin();
      row_queue.erase(row_queue.begin());
      row_alive[static_cast<std::size_t>(i)] = 0;
      --live_rows;
      for (const Index j : out.cols)
        if (col_alive[static_cast<std::size_t>(j)]) out.R.emplace_back(i, j);
      out.max_row_ones = std::max(out.max_row_ones, ones);
      out.max_row_pairs = std::max(out.max_row_pairs, live_cols);
      if (ones > threshold) ++out.lines_over_threshold;
      for (const Vertex j : a.neighbors(i)) {
        const auto js = static_cast<std::size_t>(j);
        if (!col_alive[js]) continue;
        col_queue.erase({col_count[js], j});
        col_queue.emplace(--col_count[js], j);
      }
    } else {
      const auto [ones, j] = *col_queue.begin();
      col_queue.erase(col_queue.begin());
      col_alive[static_cast<std::size_t>(j)] = 0;
      --live_cols;
      for (const Index i : out.rows)
        if (row_alive[static_cast<std::size_t>(i)]) out.C.emplace_back(i, j);
      out.max_col_ones = std::max(out.max_col_ones, ones);
      out.max_col_pairs = std::max(out.max_col_pairs, live_rows);
      if (ones > threshold) ++out.lines_over_threshold;
      for (const Vertex i : a.neighbors(j)) {
        const auto is = static_cast<std::size_t>(i);
        if (!row_alive[is]) continue;
        row_queue.erase({row_count[is], i});
        row_queue.emplace(--row_count[is], i);
      }
    }
  }
  std::sort(out.R.begin(), out.R.end());
  std::sort(out.C.begin(), out.C.end());
  return out;
}

DenseMatrix restrict(const DenseMatrix& m, const IndexPairSet& s) {
  DenseMatrix out = DenseMatrix::Zero(m.rows(), m.cols());
  for (const auto& [i, j] : s) {
    if (i < 0 || j < 0 || i >= m.rows() || j >= m.cols())
      throw InvalidArgument("index pair outside the matrix");
    out(i, j) = m(i, j);
  }
  return out;
}

IndexPairSet block_pairs(const std::vector<Index>& rows, const std::vector<Index>& cols) {
  IndexPairSet out;
  out.reserve(rows.size() * cols.size());
  for (const Index i : rows)
    for (const Index j : cols) out.emplace_back(i, j);
  return out;
}

BlockRestriction restrict(const LinearOperator& op, const std::vector<Index>& rows,
                          const std::vector<Index>& cols) {
  return BlockRestriction(op, index_mask(op.rows(), rows), index_mask(op.cols(), cols));
}

RestrictionCheck restriction_bound_check(const DenseMatrix& b, const IndexPairSet& s) {
  const Index n = b.rows();
  if (b.cols() != n) throw InvalidArgument("restriction_bound_check needs a square matrix");
  if (b != b.transpose()) throw InvalidArgument("restriction_bound_check needs a symmetric matrix");
  if ((b.array() < 0.0).any()) throw InvalidArgument("restriction_bound_check needs nonnegative entries");

  const Vector sums = b.rowwise().sum();
  if ((sums.array() <= 0.0).any()) throw InvalidArgument("zero row sum");
  const DenseMatrix masked = restrict(b, s);
  const Vector masked_sums = masked.rowwise().sum();

  RestrictionCheck out;
  for (Index i = 0; i < n; ++i) out.eps = std::max(out.eps, masked_sums(i) / sums(i));
  const Vector inv_sqrt = sums.array().rsqrt();
  const DenseMatrix averaging = inv_sqrt.asDiagonal() * b * inv_sqrt.asDiagonal();
  out.lhs = spectral_norm_dense(restrict(averaging, s));
  out.holds = out.lhs <= std::sqrt(out.eps) + 1e-10;
  return out;
}

double residual_norm_bound(double d, double r, Index n, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("residual_norm_bound requires tau > 0");
  if (!(d >= std::exp(1.0))) throw InvalidArgument("residual_norm_bound requires d >= e");
  if (!(r >= 1.0)) throw InvalidArgument("residual_norm_bound requires r >= 1");
  const double ntau = static_cast<double>(n) * tau;
  return 2.0 / std::sqrt(d) + std::sqrt(40.0 * r * std::log(d)) / std::sqrt(ntau);
}

double expected_residual_bound(double d, Index n, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("expected_residual_bound requires tau > 0");
  if (!(d > 0.0)) throw InvalidArgument("expected_residual_bound requires d > 0");
  const double ntau = static_cast<double>(n) * tau;
  return 2.0 / std::sqrt(d) + 2.0 / std::sqrt(ntau);
}

std::vector<Index> top_degree_vertices(const SparseAdjacency& a, Index count) {
  const Index n = a.size();
  count = std::clamp<Index>(count, 0, n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::partial_sort(order.begin(), order.begin() + count, order.end(), [&](Index x, Index y) {
    if (a.degree(x) != a.degree(y)) return a.degree(x) > a.degree(y);
    return x < y;
  });
  order.resize(static_cast<std::size_t>(count));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace regspec
