#include "regspec/linear_operator.hpp"

#include "regspec/error.hpp"

namespace regspec {

void LinearOperator::apply_transpose(const Eigen::Ref<const Vector>& x,
                                     Eigen::Ref<Vector> y) const {
  if (!is_symmetric())
    throw InvalidArgument("operator does not implement apply_transpose");
  apply(x, y);
}

Vector LinearOperator::operator*(const Vector& x) const {
  Vector y(rows());
  apply(x, y);
  return y;
}

DenseOperator::DenseOperator(DenseMatrix m, bool symmetric)
    : m_(std::move(m)), symmetric_(symmetric) {
  if (symmetric_ && m_.rows() != m_.cols())
    throw InvalidArgument("symmetric dense operator must be square");
}

void DenseOperator::apply(const Eigen::Ref<const Vector>& x,
                          Eigen::Ref<Vector> y) const {
  y.noalias() = m_ * x;
}

void DenseOperator::apply_transpose(const Eigen::Ref<const Vector>& x,
                                    Eigen::Ref<Vector> y) const {
  y.noalias() = m_.transpose() * x;
}

DifferenceOperator::DifferenceOperator(const LinearOperator& lhs,
                                       const LinearOperator& rhs)
    : lhs_(lhs), rhs_(rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw InvalidArgument("difference of operators with different shapes");
}

void DifferenceOperator::apply(const Eigen::Ref<const Vector>& x,
                               Eigen::Ref<Vector> y) const {
  scratch_.resize(rows());
  lhs_.apply(x, y);
  rhs_.apply(x, scratch_);
  y -= scratch_;
}

void DifferenceOperator::apply_transpose(const Eigen::Ref<const Vector>& x,
                                         Eigen::Ref<Vector> y) const {
  scratch_.resize(cols());
  lhs_.apply_transpose(x, y);
  rhs_.apply_transpose(x, scratch_);
  y -= scratch_;
}

BlockRestriction::BlockRestriction(const LinearOperator& base,
                                   std::vector<char> row_mask,
                                   std::vector<char> col_mask)
    : base_(base), row_mask_(std::move(row_mask)), col_mask_(std::move(col_mask)) {
  if (static_cast<Index>(row_mask_.size()) != base.rows() ||
      static_cast<Index>(col_mask_.size()) != base.cols())
    throw InvalidArgument("restriction mask size does not match operator");
  symmetric_ = base.is_symmetric() && row_mask_ == col_mask_;
}

void BlockRestriction::apply(const Eigen::Ref<const Vector>& x,
                             Eigen::Ref<Vector> y) const {
  masked_.resize(cols());
  for (Index j = 0; j < cols(); ++j) masked_(j) = col_mask_[static_cast<std::size_t>(j)] ? x(j) : 0.0;
  base_.apply(masked_, y);
  for (Index i = 0; i < rows(); ++i)
    if (!row_mask_[static_cast<std::size_t>(i)]) y(i) = 0.0;
}

void BlockRestriction::apply_transpose(const Eigen::Ref<const Vector>& x,
                                       Eigen::Ref<Vector> y) const {
  masked_.resize(rows());
  for (Index i = 0; i < rows(); ++i) masked_(i) = row_mask_[static_cast<std::size_t>(i)] ? x(i) : 0.0;
  base_.apply_transpose(masked_, y);
  for (Index j = 0; j < cols(); ++j)
    if (!col_mask_[static_cast<std::size_t>(j)]) y(j) = 0.0;
}

NormalOperator::NormalOperator(const LinearOperator& base) : base_(base) {}

void NormalOperator::apply(const Eigen::Ref<const Vector>& x,
                           Eigen::Ref<Vector> y) const {
  tmp_.resize(base_.rows());
  base_.apply(x, tmp_);
  base_.apply_transpose(tmp_, y);
}

std::vector<char> index_mask(Index n, const std::vector<Index>& indices) {
  std::vector<char> mask(static_cast<std::size_t>(n), 0);
  for (const Index i : indices) {
    if (i < 0 || i >= n) throw InvalidArgument("index out of range in mask");
    mask[static_cast<std::size_t>(i)] = 1;
  }
  return mask;
}

DenseMatrix materialize(const LinearOperator& op) {
  if (op.rows() > 4096 || op.cols() > 4096)
    throw InvalidArgument("materialize is limited to 4096 x 4096 operators");
  DenseMatrix m(op.rows(), op.cols());
  Vector e = Vector::Zero(op.cols());
  Vector col(op.rows());
  for (Index j = 0; j < op.cols(); ++j) {
    e(j) = 1.0;
    op.apply(e, col);
    m.col(j) = col;
    e(j) = 0.0;
  }
  return m;
}

}  // namespace regspec
