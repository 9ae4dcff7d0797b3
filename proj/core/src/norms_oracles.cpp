#include "regspec/norms_oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "regspec/error.hpp"
#include "regspec/linear_operator.hpp"
#include "regspec/rng.hpp"
#include "regspec/spectral_core.hpp"

namespace regspec {

JacobiResult jacobi_eigensolver(const DenseMatrix& sym, double tol, int max_sweeps) {
  const Index n = sym.rows();
  if (sym.cols() != n) throw InvalidArgument("jacobi_eigensolver needs a square matrix");
  if (!sym.allFinite()) throw InvalidArgument("jacobi_eigensolver: non-finite entries");
  DenseMatrix a = sym;
  DenseMatrix v = DenseMatrix::Identity(n, n);
  const double frob = a.norm();

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Index q = 1; q < n; ++q)
      for (Index p = 0; p < q; ++p) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= tol * frob || off == 0.0) break;

    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return a(x, x) > a(y, y); });
  JacobiResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.eigenvectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  out.sweeps = sweep;
  return out;
}

double inf_to_one_norm_exact(const DenseMatrix& input) {
  if (!input.allFinite()) throw InvalidArgument("inf_to_one_norm_exact: non-finite entries");
  // The norm is invariant under transposition; enumerate the shorter side.
  const bool transpose = input.rows() > input.cols();
  const Index m = transpose ? input.cols() : input.rows();
  const Index k = transpose ? input.rows() : input.cols();
  if (m == 0 || k == 0) return 0.0;
  if (m > 25)
    throw BudgetExceeded(
        "exact l_inf->l_1 enumeration limited to min(m, k) <= 25; "
        "use inf_to_one_norm_lower_bound for a Monte Carlo lower bound");

  // rows[i * k + j] = B'(i, j) where B' is the (possibly transposed) input.
  std::vector<double> rows(static_cast<std::size_t>(m * k));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < k; ++j)
      rows[static_cast<std::size_t>(i * k + j)] = transpose ? input(j, i) : input(i, j);

  // s = B'^T x, starting from x = (1, ..., 1); x_0 stays +1 since x and -x
  // give the same value.
  std::vector<double> s(static_cast<std::size_t>(k), 0.0);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < k; ++j) s[static_cast<std::size_t>(j)] += rows[static_cast<std::size_t>(i * k + j)];
  const auto value = [&] {
    double v = 0.0;
    for (const double sj : s) v += std::abs(sj);
    return v;
  };
  double best = value();

  std::vector<signed char> x(static_cast<std::size_t>(m), 1);
  const std::uint64_t steps = std::uint64_t{1} << (m - 1);
  for (std::uint64_t g = 1; g < steps; ++g) {
    const auto bit = static_cast<Index>(std::countr_zero(g)) + 1;
    const double* row = rows.data() + bit * k;
    const double factor = x[static_cast<std::size_t>(bit)] > 0 ? -2.0 : 2.0;
    x[static_cast<std::size_t>(bit)] = static_cast<signed char>(-x[static_cast<std::size_t>(bit)]);
    double v = 0.0;
    for (Index j = 0; j < k; ++j) {
      s[static_cast<std::size_t>(j)] += factor * row[j];
      v += std::abs(s[static_cast<std::size_t>(j)]);
    }
    best = std::max(best, v);
  }
  return best;
}

double inf_to_one_norm_lower_bound(const LinearOperator& m, int samples,
                                   std::uint64_t seed) {
  const Index rows = m.rows(), cols = m.cols();
  CounterRng rng(derive_seed(seed, 0x63757432));
  Vector x(rows), y(cols), mty(cols), my(rows);
  double best = 0.0;
  const auto sign = [](double v) { return v >= 0.0 ? 1.0 : -1.0; };
  for (int s = 0; s < samples; ++s) {
    for (Index i = 0; i < rows; ++i) x(i) = sign(rng.symmetric());
    double current = -INFINITY;
    for (int it = 0; it < 100; ++it) {
      m.apply_transpose(x, mty);
      for (Index j = 0; j < cols; ++j) y(j) = sign(mty(j));
      m.apply(y, my);
      const double v = my.cwiseAbs().sum();  // x = sign(M y) maximizes x^T M y
      for (Index i = 0; i < rows; ++i) x(i) = sign(my(i));
      if (v <= current) break;
      current = v;
    }
    best = std::max(best, current);
  }
  return best;
}

double spectral_norm_dense(const DenseMatrix& b) {
  if (b.rows() > 512 || b.cols() > 512)
    throw BudgetExceeded("spectral_norm_dense limited to 512 x 512");
  if (b.size() == 0) return 0.0;
  if (b.rows() == b.cols() && b == b.transpose()) {
    const auto res = jacobi_eigensolver(b);
    return std::max(std::abs(res.eigenvalues(0)),
                    std::abs(res.eigenvalues(res.eigenvalues.size() - 1)));
  }
  const DenseMatrix gram = b.rows() <= b.cols() ? DenseMatrix(b * b.transpose())
                                                : DenseMatrix(b.transpose() * b);
  const auto res = jacobi_eigensolver(gram);
  return std::sqrt(std::max(0.0, res.eigenvalues(0)));
}

namespace {

std::vector<Index> mask_to_indices(std::uint32_t mask) {
  std::vector<Index> out;
  for (Index i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1U) out.push_back(i);
  return out;
}

}  // namespace

GrothendieckCert grothendieck_submatrix_search(const DenseMatrix& b, double delta) {
  const Index m = b.rows(), k = b.cols();
  if (m < 1 || k < 1 || m > 8 || k > 8)
    throw BudgetExceeded("grothendieck_submatrix_search limited to 1..8 x 1..8");
  if (!(delta > 0.0 && delta <= 1.0))
    throw InvalidArgument("delta must lie in (0, 1]");

  GrothendieckCert cert;
  cert.delta = delta;
  cert.cut_norm = inf_to_one_norm_exact(b);
  cert.bound = 2.0 * cert.cut_norm / (delta * std::sqrt(static_cast<double>(m * k)));

  const auto min_size = [delta](Index total) {
    return static_cast<int>(std::ceil((1.0 - delta) * static_cast<double>(total) - 1e-12));
  };
  const int rmin = std::max(0, min_size(m));
  const int cmin = std::max(0, min_size(k));

  std::vector<std::vector<std::uint32_t>> row_masks(static_cast<std::size_t>(m) + 1),
      col_masks(static_cast<std::size_t>(k) + 1);
  for (std::uint32_t mask = 0; mask < (1U << m); ++mask)
    row_masks[static_cast<std::size_t>(std::popcount(mask))].push_back(mask);
  for (std::uint32_t mask = 0; mask < (1U << k); ++mask)
    col_masks[static_cast<std::size_t>(std::popcount(mask))].push_back(mask);

  double best_ratio = INFINITY;
  for (int total = static_cast<int>(m + k); total >= rmin + cmin; --total) {
    struct Candidate {
      std::vector<Index> rows, cols;
    };
    std::vector<Candidate> level;
    for (int rs = std::max(rmin, total - static_cast<int>(k));
         rs <= std::min(static_cast<int>(m), total - cmin); ++rs) {
      const int cs = total - rs;
      for (const auto rmask : row_masks[static_cast<std::size_t>(rs)])
        for (const auto cmask : col_masks[static_cast<std::size_t>(cs)])
          level.push_back({mask_to_indices(rmask), mask_to_indices(cmask)});
    }
    std::sort(level.begin(), level.end(), [](const Candidate& x, const Candidate& y) {
      if (x.rows != y.rows) return x.rows < y.rows;
      return x.cols < y.cols;
    });
    for (auto& cand : level) {
      DenseMatrix sub(static_cast<Index>(cand.rows.size()), static_cast<Index>(cand.cols.size()));
      for (Index i = 0; i < sub.rows(); ++i)
        for (Index j = 0; j < sub.cols(); ++j)
          sub(i, j) = b(cand.rows[static_cast<std::size_t>(i)], cand.cols[static_cast<std::size_t>(j)]);
      const double opnorm = spectral_norm_dense(sub);
      if (opnorm <= cert.bound * (1.0 + 1e-12)) {
        cert.found = true;
        cert.rows = std::move(cand.rows);
        cert.cols = std::move(cand.cols);
        cert.opnorm = opnorm;
        return cert;
      }
      const double ratio = opnorm / cert.bound;
      if (ratio < best_ratio) {
        best_ratio = ratio;
        cert.rows = cand.rows;
        cert.cols = cand.cols;
        cert.opnorm = opnorm;
      }
    }
  }
  return cert;
}

CutnormReport cutnorm_concentration_check(const ProbabilityMatrix& p, double r,
                                          int replicates, std::uint64_t seed,
                                          int mc_samples) {
  if (!(r >= 1.0)) throw InvalidArgument("cutnorm check requires r >= 1");
  if (replicates < 1) throw InvalidArgument("replicates must be >= 1");
  const Index n = p.size();
  const double nd = static_cast<double>(n);
  const double d = nd * p.max_entry();

  CutnormReport rep;
  rep.exact = n <= 25;
  rep.bound = 5.0 * r * nd * std::sqrt(d);
  rep.tail_probability = std::exp(-2.0 * r * nd);
  const DenseMatrix expected = rep.exact ? p.to_dense() : DenseMatrix();
  const ProbabilityOperator expected_op(p);

  for (int t = 0; t < replicates; ++t) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
    const SparseAdjacency a = sample_graph(p, s);
    double value = 0.0;
    if (rep.exact) {
      value = inf_to_one_norm_exact(a.to_dense() - expected);
    } else {
      const AdjacencyOperator adj(a);
      const DifferenceOperator diff(adj, expected_op);
      value = inf_to_one_norm_lower_bound(diff, mc_samples, s);
    }
    rep.values.push_back(value);
    rep.seeds.push_back(s);
    if (value > rep.bound) ++rep.exceedances;
  }
  rep.exceed_fraction = static_cast<double>(rep.exceedances) / replicates;
  return rep;
}

}  // namespace regspec
