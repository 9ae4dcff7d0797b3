#pragma once

// Normalized Laplacian and averaging operators of (regularized) graphs.
//
//   averaging  L(A)   = D^{-1/2} A D^{-1/2}
//   laplacian  𝓛(A)   = I - L(A)
//
// Regularization::Full uses A_tau = A + tau 11^T (degrees d_i + n tau) and
// never materializes the rank-one term. Regularization::Degree keeps A and
// shifts D to D + n tau I. Regularization::None with tau = 0 zeroes every
// row and column of an isolated vertex in both kinds.

#include <cstdint>
#include <variant>
#include <vector>

#include "regspec/eigensolver.hpp"
#include "regspec/graph_model.hpp"
#include "regspec/linear_operator.hpp"

namespace regspec {

enum class Regularization { None, Full, Degree };
enum class OperatorKind { Laplacian, Averaging };

/// d_i = sum_j A_ij.
std::vector<Index> degrees(const SparseAdjacency& a);

/// The adjacency matrix itself as an operator. Holds a reference to `a`.
class AdjacencyOperator final : public LinearOperator {
 public:
  explicit AdjacencyOperator(const SparseAdjacency& a) : a_(a) {}
  Index rows() const override { return a_.size(); }
  Index cols() const override { return a_.size(); }
  bool is_symmetric() const override { return true; }
  void apply(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> y) const override {
    a_.multiply(x, y);
  }

 private:
  const SparseAdjacency& a_;
};

/// The expected adjacency P as an operator. Holds a reference to `p`.
class ProbabilityOperator final : public LinearOperator {
 public:
  explicit ProbabilityOperator(const ProbabilityMatrix& p) : p_(p) {}
  Index rows() const override { return p_.size(); }
  Index cols() const override { return p_.size(); }
  bool is_symmetric() const override { return true; }
  void apply(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> y) const override {
    p_.multiply(x, y);
  }

 private:
  const ProbabilityMatrix& p_;
};

class RegularizedOperator final : public LinearOperator {
 public:
  /// Sampled graph. Holds a reference to `a`.
  RegularizedOperator(const SparseAdjacency& a, double tau, Regularization mode,
                      OperatorKind kind);
  /// Expected adjacency. Holds a reference to `p`.
  RegularizedOperator(const ProbabilityMatrix& p, double tau, Regularization mode,
                      OperatorKind kind);

  Index rows() const override { return n_; }
  Index cols() const override { return n_; }
  bool is_symmetric() const override { return true; }
  void apply(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> y) const override;

  double tau() const noexcept { return tau_; }
  Regularization mode() const noexcept { return mode_; }
  OperatorKind kind() const noexcept { return kind_; }
  /// Degrees after regularization (d_i + n tau for Full/Degree).
  const Vector& regularized_degrees() const noexcept { return degrees_; }
  /// D_tau^{-1/2}, with zeros at zero-degree vertices.
  const Vector& inv_sqrt_degrees() const noexcept { return inv_sqrt_; }

 private:
  void init(const Vector& raw_degrees);

  std::variant<const SparseAdjacency*, const ProbabilityMatrix*> base_;
  Index n_ = 0;
  double tau_ = 0.0;
  Regularization mode_;
  OperatorKind kind_;
  Vector degrees_;
  Vector inv_sqrt_;
  mutable Vector scaled_;
};

RegularizedOperator make_operator(const SparseAdjacency& a, double tau,
                                  Regularization mode, OperatorKind kind);
RegularizedOperator make_expected_operator(const ProbabilityMatrix& p, double tau,
                                           Regularization mode, OperatorKind kind);

struct Eigenpair {
  double value = 0.0;
  Vector vector;
};

/// Unit eigenvector for the second largest eigenvalue of a symmetric
/// averaging operator, signed so its first nonzero coordinate is positive.
/// Throws IllDefinedEigenvector when that eigenvalue is within
/// max(1e-12, 2 tol) of a neighbour.
Eigenpair second_eigenvector(const LinearOperator& averaging, std::uint64_t seed = 0,
                             double tol = 1e-10);

/// Second smallest eigenpair of 𝓛(A_tau), reported as the matching
/// eigenpair of L(A_tau) (value = 1 - laplacian eigenvalue). Requires tau > 0.
Eigenpair second_eigenvector_laplacian(const SparseAdjacency& a, double tau,
                                       std::uint64_t seed = 0, double tol = 1e-10);

/// Flips `v` so that its first coordinate with |v_i| > 1e-12 is positive.
void fix_sign(Vector& v);

}  // namespace regspec
