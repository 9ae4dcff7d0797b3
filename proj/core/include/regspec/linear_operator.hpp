#pragma once

#include <memory>
#include <vector>

#include "regspec/types.hpp"

namespace regspec {

/// Matrix-free linear map R^cols -> R^rows.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual bool is_symmetric() const = 0;

  /// y = M x. `y` must not alias `x`.
  virtual void apply(const Eigen::Ref<const Vector>& x,
                     Eigen::Ref<Vector> y) const = 0;
  /// y = M^T x. The default forwards to apply() for symmetric operators and
  /// throws otherwise.
  virtual void apply_transpose(const Eigen::Ref<const Vector>& x,
                               Eigen::Ref<Vector> y) const;

  Vector operator*(const Vector& x) const;
};

/// Explicit dense matrix.
class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(DenseMatrix m, bool symmetric = false);

  Index rows() const override { return m_.rows(); }
  Index cols() const override { return m_.cols(); }
  bool is_symmetric() const override { return symmetric_; }
  void apply(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> y) const override;
  void apply_transpose(const Eigen::Ref<const Vector>& x,
                       Eigen::Ref<Vector> y) const override;

  const DenseMatrix& matrix() const noexcept { return m_; }

 private:
  DenseMatrix m_;
  bool symmetric_;
};

/// Holds references to both operands; they must outlive this object.
class DifferenceOperator final : public LinearOperator {
 public:
  DifferenceOperator(const LinearOperator& lhs, const LinearOperator& rhs);

  Index rows() const override { return lhs_.rows(); }
  Index cols() const override { return lhs_.cols(); }
  bool is_symmetric() const override {
    return lhs_.is_symmetric() && rhs_.is_symmetric();
  }
  void apply(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> y) const override;
  void apply_transpose(const Eigen::Ref<const Vector>& x,
                       Eigen::Ref<Vector> y) const override;

 private:
  const LinearOperator& lhs_;
  const LinearOperator& rhs_;
  mutable Vector scratch_;
};

/// M_{I x J} embedded at the original indices: rows outside I and columns
/// outside J are zeroed. Holds a reference to `base`.
class BlockRestriction final : public LinearOperator {
 public:
  BlockRestriction(const LinearOperator& base, std::vector<char> row_mask,
                   std::vector<char> col_mask);

  Index rows() const override { return base_.rows(); }
  Index cols() const override { return base_.cols(); }
  bool is_symmetric() const override { return symmetric_; }
  void apply(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> y) const override;
  void apply_transpose(const Eigen::Ref<const Vector>& x,
                       Eigen::Ref<Vector> y) const override;

 private:
  const LinearOperator& base_;
  std::vector<char> row_mask_;
  std::vector<char> col_mask_;
  bool symmetric_;
  mutable Vector masked_;
};

/// M^T M for a (possibly rectangular) operator. Holds a reference to `base`.
class NormalOperator final : public LinearOperator {
 public:
  explicit NormalOperator(const LinearOperator& base);

  Index rows() const override { return base_.cols(); }
  Index cols() const override { return base_.cols(); }
  bool is_symmetric() const override { return true; }
  void apply(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> y) const override;

 private:
  const LinearOperator& base_;
  mutable Vector tmp_;
};

/// Membership mask of size n for an index list.
std::vector<char> index_mask(Index n, const std::vector<Index>& indices);

/// Applies `op` to every unit vector. Intended for small operators (tests,
/// dense oracles); refuses n > 4096.
DenseMatrix materialize(const LinearOperator& op);

}  // namespace regspec
