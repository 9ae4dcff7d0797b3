#pragma once

// Independent reference computations for tests. Everything here works on
// small dense matrices with straightforward loops and Eigen's dense solver,
// sharing no code with the library's fast paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// D^{-1/2} M D^{-1/2} with D = diag(row sums of M); zero rows/columns where
/// the row sum is zero.
inline Matrix averaging(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Vec s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = m.row(i).sum();
    s(i) = d > 0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = s(i) * m(i, j) * s(j);
  return out;
}

/// I - averaging(M), with zeroed rows/columns at zero row sums.
inline Matrix laplacian(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Matrix out = -averaging(m);
  for (Eigen::Index i = 0; i < n; ++i)
    if (m.row(i).sum() > 0) out(i, i) += 1.0;
  return out;
}

/// D_shift^{-1/2} M D_shift^{-1/2} with D_shift = diag(row sums) + shift I.
inline Matrix averaging_shifted(const Matrix& m, double shift) {
  const Eigen::Index n = m.rows();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = m(i, j) / std::sqrt((m.row(i).sum() + shift) * (m.row(j).sum() + shift));
  return out;
}

/// Descending eigenvalues via Eigen's dense solver.
inline Vec eigenvalues_desc(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  Vec v = es.eigenvalues().reverse();
  return v;
}

/// Largest singular value via Eigen's SVD.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

/// max x^T B y over all sign pairs, both sides enumerated.
inline double cut_norm_naive(const Matrix& b) {
  const auto m = b.rows(), k = b.cols();
  double best = -INFINITY;
  for (std::uint64_t xs = 0; xs < (std::uint64_t{1} << m); ++xs)
    for (std::uint64_t ys = 0; ys < (std::uint64_t{1} << k); ++ys) {
      double v = 0.0;
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
          const double sx = (xs >> i) & 1 ? -1.0 : 1.0;
          const double sy = (ys >> j) & 1 ? -1.0 : 1.0;
          v += sx * b(i, j) * sy;
        }
      best = std::max(best, v);
    }
  return best;
}

/// Small deterministic generator for test inputs (xorshift64*).
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : s_(seed * 2654435761ULL + 0x9E3779B97F4A7C15ULL) {}
  std::uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 2685821657736338717ULL;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * uniform() - 1.0; }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

 private:
  std::uint64_t s_;
};

inline Matrix random_symmetric(Eigen::Index n, TestRng& rng) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) m(i, j) = m(j, i) = rng.symmetric();
  return m;
}

}  // namespace oracle
