#include "regspec/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "regspec/error.hpp"
#include "regspec/rng.hpp"

namespace regspec {
namespace {

Vector random_unit(Index n, CounterRng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.symmetric();
  const double nrm = v.norm();
  if (nrm == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / nrm;
}

void project_out(const DenseMatrix& q, Eigen::Ref<Vector> v) {
  if (q.cols() == 0) return;
  const Vector c = q.transpose() * v;
  v.noalias() -= q * c;
}

// Random unit vector orthogonal to `locked` and the first `cols` columns of
// `basis`. Returns false if they already span the space numerically.
bool fresh_direction(const DenseMatrix& basis, Index cols, const DenseMatrix& locked,
                     CounterRng& rng, Eigen::Ref<Vector> out) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    Vector v = random_unit(basis.rows(), rng);
    for (int pass = 0; pass < 2; ++pass) {
      project_out(locked, v);
      const Vector c = basis.leftCols(cols).transpose() * v;
      v.noalias() -= basis.leftCols(cols) * c;
    }
    const double nrm = v.norm();
    if (nrm > 1e-8) {
      out = v / nrm;
      return true;
    }
  }
  return false;
}

std::vector<Index> selection_order(const Vector& theta, Which which) {
  std::vector<Index> order(static_cast<std::size_t>(theta.size()));
  std::iota(order.begin(), order.end(), Index{0});
  // Eigen returns ascending values; stable sorts keep ties deterministic.
  switch (which) {
    case Which::Largest:
      std::stable_sort(order.begin(), order.end(),
                       [&](Index a, Index b) { return theta(a) > theta(b); });
      break;
    case Which::Smallest:
      std::stable_sort(order.begin(), order.end(),
                       [&](Index a, Index b) { return theta(a) < theta(b); });
      break;
    case Which::LargestMagnitude:
      std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const double fa = std::abs(theta(a)), fb = std::abs(theta(b));
        if (fa != fb) return fa > fb;
        return theta(a) > theta(b);
      });
      break;
  }
  return order;
}

}  // namespace

bool looks_symmetric(const LinearOperator& op, std::uint64_t seed, int trials) {
  if (op.rows() != op.cols()) return false;
  const Index n = op.rows();
  CounterRng rng(derive_seed(seed, 0x73796d));
  Vector mx(n), my(n);
  for (int t = 0; t < trials; ++t) {
    const Vector x = random_unit(n, rng);
    const Vector y = random_unit(n, rng);
    op.apply(x, mx);
    op.apply(y, my);
    const double lhs = x.dot(my);
    const double rhs = y.dot(mx);
    const double scale = std::max({1.0, mx.norm(), my.norm()});
    if (std::abs(lhs - rhs) > 1e-10 * scale) return false;
  }
  return true;
}

namespace {

// One thick-restart Lanczos run on the orthogonal complement of the
// orthonormal columns of `locked`, returning `k` pairs.
SpectralResult lanczos(const LinearOperator& op, const EigOptions& opt, Index k,
                       const DenseMatrix& locked, std::uint64_t stream) {
  const Index n = op.rows();
  const Index dim = n - locked.cols();
  const Index m = std::min(dim, std::max(opt.max_basis, 2 * k + 2));
  const Index keep = std::min(m - 1, std::max(2 * k, k + 8));

  DenseMatrix V(n, m + 1);
  DenseMatrix H = DenseMatrix::Zero(m, m);
  CounterRng rng(derive_seed(opt.seed, stream));
  if (!fresh_direction(V, 0, locked, rng, V.col(0)))
    throw NonConvergence("Lanczos could not find a start vector", {});

  Vector w(n), h, h2;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es;
  std::vector<double> best(static_cast<std::size_t>(k),
                           std::numeric_limits<double>::infinity());

  const auto tol_for = [&](double theta) {
    return opt.relative_tol ? opt.tol * std::abs(theta) : opt.tol;
  };

  Index j = 0;
  Index next_check = k;
  Index matvecs = 0;
  int restarts = 0;
  double anorm = 0.0;

  while (true) {
    op.apply(V.col(j), w);
    ++matvecs;
    const double wnorm0 = w.norm();
    anorm = std::max(anorm, wnorm0);
    project_out(locked, w);
    h = V.leftCols(j + 1).transpose() * w;
    w.noalias() -= V.leftCols(j + 1) * h;
    project_out(locked, w);
    h2 = V.leftCols(j + 1).transpose() * w;
    w.noalias() -= V.leftCols(j + 1) * h2;
    h += h2;
    H.block(0, j, j + 1, 1) = h;
    H.block(j, 0, 1, j + 1) = h.transpose();
    const double beta = w.norm();
    ++j;

    // Coupling of the basis to the next Lanczos vector; zero when the Krylov
    // space became invariant (to working precision) or filled the space.
    double coupling = beta;
    const bool breakdown = beta <= 1e-13 * anorm || anorm == 0.0;
    if (j >= dim) {
      coupling = 0.0;
    } else if (breakdown) {
      coupling = 0.0;
      if (!fresh_direction(V, j, locked, rng, V.col(j))) {
        throw NonConvergence("Lanczos could not extend the Krylov basis", best);
      }
    } else {
      V.col(j) = w / beta;
    }

    const bool at_end = j == m;
    if (j < k || (j < next_check && !at_end)) continue;
    next_check = j + std::max<Index>(4, j / 6);

    es.compute(H.topLeftCorner(j, j));
    const Vector& theta = es.eigenvalues();
    const DenseMatrix& Y = es.eigenvectors();
    const auto order = selection_order(theta, opt.which);

    bool estimated_ok = true;
    for (Index i = 0; i < k; ++i) {
      const Index c = order[static_cast<std::size_t>(i)];
      const double r = std::abs(coupling * Y(j - 1, c));
      best[static_cast<std::size_t>(i)] = std::min(best[static_cast<std::size_t>(i)], r);
      estimated_ok = estimated_ok && r <= tol_for(theta(c));
    }

    if (estimated_ok) {
      SpectralResult res;
      res.eigenvectors.resize(n, k);
      Vector ax(n);
      bool verified = true;
      for (Index i = 0; i < k; ++i) {
        const Index c = order[static_cast<std::size_t>(i)];
        Vector x = V.leftCols(j) * Y.col(c);
        x.normalize();
        op.apply(x, ax);
        ++matvecs;
        const double r = (ax - theta(c) * x).norm();
        res.eigenvalues.push_back(theta(c));
        res.residuals.push_back(r);
        res.eigenvectors.col(i) = x;
        verified = verified && r <= tol_for(theta(c));
      }
      if (verified) {
        res.matvecs = matvecs;
        res.restarts = restarts;
        return res;
      }
      if (j >= dim)
        throw NonConvergence("Lanczos residuals above tolerance on a full basis",
                             res.residuals);
    }

    if (!at_end) continue;
    if (j >= dim)
      throw NonConvergence("Lanczos did not converge on a full basis", best);
    if (++restarts > opt.max_restarts)
      throw NonConvergence("Lanczos did not converge within max_restarts", best);

    // Thick restart: keep the `keep` best Ritz vectors plus the residual
    // direction; the projected matrix becomes diagonal and the arrow row is
    // recomputed by the next projection.
    DenseMatrix Ysel(j, keep);
    for (Index i = 0; i < keep; ++i) Ysel.col(i) = Y.col(order[static_cast<std::size_t>(i)]);
    const DenseMatrix kept = V.leftCols(m) * Ysel;
    const Vector residual_dir = V.col(m);
    V.leftCols(keep) = kept;
    V.col(keep) = residual_dir;
    H.setZero();
    for (Index i = 0; i < keep; ++i) H(i, i) = theta(order[static_cast<std::size_t>(i)]);
    j = keep;
    next_check = j + 4;
  }
}

bool precedes(double x, double y, Which which) {
  switch (which) {
    case Which::Largest: return x > y;
    case Which::Smallest: return x < y;
    case Which::LargestMagnitude:
      return std::abs(x) != std::abs(y) ? std::abs(x) > std::abs(y) : x > y;
  }
  return false;
}

}  // namespace

SpectralResult eig_symmetric(const LinearOperator& op, const EigOptions& opt) {
  const Index n = op.rows();
  if (op.cols() != n) throw InvalidArgument("eig_symmetric needs a square operator");
  if (!op.is_symmetric()) throw InvalidArgument("eig_symmetric needs a symmetric operator");
  if (opt.k < 1 || opt.k > n) throw InvalidArgument("eig_symmetric: k must be in [1, n]");
  if (!(opt.tol > 0.0)) throw InvalidArgument("eig_symmetric: tol must be positive");
  if (opt.check_symmetry && !looks_symmetric(op, opt.seed))
    throw InvalidArgument("operator failed the randomized symmetry check");

  const Index k = opt.k;
  SpectralResult res = lanczos(op, opt, k, DenseMatrix(n, 0), 0x6c616e637a6f73);
  if (!opt.check_multiplicity) return res;

  // Every pair found so far; new runs work on the complement of all of them.
  std::vector<double> values = res.eigenvalues, residuals = res.residuals;
  DenseMatrix pool = res.eigenvectors;
  for (std::uint64_t pass = 1; pool.cols() < n; ++pass) {
    const Index kk = std::min(k, n - pool.cols());
    const SpectralResult more = lanczos(op, opt, kk, pool, derive_seed(0x6d756c74, pass));
    res.matvecs += more.matvecs;
    res.restarts += more.restarts;

    std::vector<Index> order(values.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return precedes(values[static_cast<std::size_t>(a)], values[static_cast<std::size_t>(b)], opt.which);
    });
    const double kth = values[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])];
    // Stop once the complement has nothing that would enter the top k.
    // Further copies of the k-th value itself do not change the top k.
    const double next = more.eigenvalues.front();
    const double slack = std::max(opt.tol, 1e-12 * std::abs(kth));
    if (!precedes(next, kth, opt.which) || std::abs(next - kth) <= slack) break;

    const Index old = pool.cols();
    pool.conservativeResize(n, old + kk);
    pool.rightCols(kk) = more.eigenvectors;
    values.insert(values.end(), more.eigenvalues.begin(), more.eigenvalues.end());
    residuals.insert(residuals.end(), more.residuals.begin(), more.residuals.end());
  }

  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return precedes(values[static_cast<std::size_t>(a)], values[static_cast<std::size_t>(b)], opt.which);
  });
  res.eigenvalues.clear();
  res.residuals.clear();
  res.eigenvectors.resize(n, k);
  for (Index i = 0; i < k; ++i) {
    const auto c = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
    res.eigenvalues.push_back(values[c]);
    res.residuals.push_back(residuals[c]);
    res.eigenvectors.col(i) = pool.col(static_cast<Index>(c));
  }
  return res;
}

double operator_norm(const LinearOperator& op, double tol, std::uint64_t seed) {
  if (!(tol > 0.0)) throw InvalidArgument("operator_norm: tol must be positive");
  EigOptions opt;
  opt.k = 1;
  opt.tol = tol;
  opt.relative_tol = true;
  opt.seed = seed;
  if (op.is_symmetric() && op.rows() == op.cols()) {
    opt.which = Which::LargestMagnitude;
    const auto res = eig_symmetric(op, opt);
    return std::abs(res.eigenvalues.front());
  }
  const NormalOperator normal(op);
  opt.which = Which::Largest;
  const auto res = eig_symmetric(normal, opt);
  return std::sqrt(std::max(0.0, res.eigenvalues.front()));
}

}  // namespace regspec
