#include "regspec/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regspec/error.hpp"

namespace regspec {

std::vector<Index> degrees(const SparseAdjacency& a) {
  std::vector<Index> d(static_cast<std::size_t>(a.size()));
  for (Index i = 0; i < a.size(); ++i)
    d[static_cast<std::size_t>(i)] = static_cast<Index>(a.neighbors(i).size());
  return d;
}

RegularizedOperator::RegularizedOperator(const SparseAdjacency& a, double tau,
                                         Regularization mode, OperatorKind kind)
    : base_(&a), n_(a.size()), tau_(tau), mode_(mode), kind_(kind) {
  Vector raw(n_);
  for (Index i = 0; i < n_; ++i) raw(i) = static_cast<double>(a.degree(i));
  init(raw);
}

RegularizedOperator::RegularizedOperator(const ProbabilityMatrix& p, double tau,
                                         Regularization mode, OperatorKind kind)
    : base_(&p), n_(p.size()), tau_(tau), mode_(mode), kind_(kind) {
  init(p.column_sums());
}

void RegularizedOperator::init(const Vector& raw_degrees) {
  if (!(tau_ >= 0.0) || !std::isfinite(tau_))
    throw InvalidArgument("regularization tau must be finite and >= 0");
  if (mode_ == Regularization::None && tau_ != 0.0)
    throw InvalidArgument("Regularization::None requires tau = 0");
  const double shift = static_cast<double>(n_) * tau_;
  degrees_ = raw_degrees.array() + shift;
  inv_sqrt_.resize(n_);
  for (Index i = 0; i < n_; ++i)
    inv_sqrt_(i) = degrees_(i) > 0.0 ? 1.0 / std::sqrt(degrees_(i)) : 0.0;
  scaled_.resize(n_);
}

void RegularizedOperator::apply(const Eigen::Ref<const Vector>& x,
                                Eigen::Ref<Vector> y) const {
  scaled_ = inv_sqrt_.cwiseProduct(x);
  std::visit([&](const auto* base) { base->multiply(scaled_, y); }, base_);
  if (mode_ == Regularization::Full && tau_ > 0.0) y.array() += tau_ * scaled_.sum();
  y.array() *= inv_sqrt_.array();
  if (kind_ == OperatorKind::Laplacian) {
    for (Index i = 0; i < n_; ++i) y(i) = degrees_(i) > 0.0 ? x(i) - y(i) : 0.0;
  }
}

RegularizedOperator make_operator(const SparseAdjacency& a, double tau,
                                  Regularization mode, OperatorKind kind) {
  return RegularizedOperator(a, tau, mode, kind);
}

RegularizedOperator make_expected_operator(const ProbabilityMatrix& p, double tau,
                                           Regularization mode, OperatorKind kind) {
  return RegularizedOperator(p, tau, mode, kind);
}

void fix_sign(Vector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

Eigenpair second_eigenvector(const LinearOperator& averaging, std::uint64_t seed,
                             double tol) {
  const Index n = averaging.rows();
  if (n < 2) throw InvalidArgument("second eigenvector needs at least 2 vertices");
  EigOptions opt;
  opt.k = std::min<Index>(3, n);
  opt.tol = tol;
  opt.seed = seed;
  opt.which = Which::Largest;
  opt.check_multiplicity = true;
  const SpectralResult res = eig_symmetric(averaging, opt);
  const auto& ev = res.eigenvalues;
  const double gap_above = ev[0] - ev[1];
  const double gap_below = ev.size() > 2 ? ev[1] - ev[2] : INFINITY;
  const double gap = std::min(gap_above, gap_below);
  // Computed copies of one eigenvalue can differ by up to twice the residual.
  if (gap < std::max(1e-12, 2.0 * tol))
    throw IllDefinedEigenvector("second eigenvalue is not simple (gap " +
                                    std::to_string(gap) + ")",
                                gap);
  Eigenpair out{ev[1], res.eigenvectors.col(1)};
  out.vector.normalize();
  fix_sign(out.vector);
  return out;
}

Eigenpair second_eigenvector_laplacian(const SparseAdjacency& a, double tau,
                                       std::uint64_t seed, double tol) {
  if (!(tau > 0.0)) throw InvalidArgument("second_eigenvector_laplacian needs tau > 0");
  const auto op = make_operator(a, tau, Regularization::Full, OperatorKind::Averaging);
  return second_eigenvector(op, seed, tol);
}

}  // namespace regspec
