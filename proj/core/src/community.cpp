#include "regspec/community.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "regspec/eigensolver.hpp"
#include "regspec/error.hpp"
#include "regspec/linear_operator.hpp"
#include "regspec/rng.hpp"
#include "regspec/spectral_core.hpp"

namespace regspec {

double auto_tau(const SparseAdjacency& a) {
  const Index n = a.size();
  if (n == 0) return 0.0;
  const double total = static_cast<double>(a.nnz());
  return total / (static_cast<double>(n) * static_cast<double>(n));
}

double misclassification_rate(const Labels& labels, const Labels& truth) {
  if (labels.size() != truth.size()) throw InvalidArgument("label vectors differ in size");
  if (labels.empty()) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) wrong += labels[i] != truth[i] ? 1 : 0;
  const double f = static_cast<double>(wrong) / static_cast<double>(labels.size());
  return std::min(f, 1.0 - f);
}

ClusterResult spectral_cluster(const SparseAdjacency& a, double tau,
                               const std::optional<Labels>& truth, std::uint64_t seed) {
  if (!(tau > 0.0)) throw InvalidArgument("spectral_cluster requires tau > 0");
  Eigenpair pair = second_eigenvector_laplacian(a, tau, seed);
  ClusterResult out;
  out.tau = tau;
  out.lambda2 = pair.value;
  out.labels.resize(static_cast<std::size_t>(a.size()));
  for (Index i = 0; i < a.size(); ++i)
    out.labels[static_cast<std::size_t>(i)] = pair.vector(i) >= 0.0 ? 1 : 2;
  out.v = std::move(pair.vector);
  if (truth) out.misclassification = misclassification_rate(out.labels, *truth);
  return out;
}

double sbm_lambda2(double a, double b, Index n, double tau) {
  return (a - b) / (a + b + 2.0 * static_cast<double>(n) * tau);
}

double eigenvector_distance(const Vector& v, const Vector& w) {
  if (v.size() != w.size()) throw InvalidArgument("eigenvector sizes differ");
  if (std::abs(v.norm() - 1.0) > 1e-8 || std::abs(w.norm() - 1.0) > 1e-8)
    throw InvalidArgument("eigenvector_distance needs unit vectors");
  return std::min((v - w).norm(), (v + w).norm());
}

DkReport davis_kahan_report(const SparseAdjacency& a, const ProbabilityMatrix& p,
                            double tau, std::uint64_t seed) {
  if (!(tau > 0.0)) throw InvalidArgument("davis_kahan_report requires tau > 0");
  if (a.size() != p.size()) throw InvalidArgument("graph and model sizes differ");
  const auto sbm = p.two_block_sbm();
  if (!sbm) throw InvalidArgument("davis_kahan_report needs a balanced two-block model");
  const Index n = a.size();

  DkReport out;
  out.lambda2 = sbm_lambda2(sbm->a, sbm->b, n, tau);

  const auto sampled = make_operator(a, tau, Regularization::Full, OperatorKind::Averaging);
  const auto expected =
      make_expected_operator(p, tau, Regularization::Full, OperatorKind::Averaging);
  const DifferenceOperator diff(sampled, expected);
  out.norm_diff = operator_norm(diff, 1e-10, derive_seed(seed, 1));

  const Eigenpair v = second_eigenvector(sampled, derive_seed(seed, 2));
  const Eigenpair w = second_eigenvector(expected, derive_seed(seed, 3));
  out.lambda2_computed = w.value;

  const double delta = out.norm_diff;
  const double upper = std::max(0.8, out.lambda2);
  out.gap = std::min(out.lambda2 - 2.0 * delta, 1.0 - upper - 2.0 * delta);
  out.applicable = out.gap > 0.0;
  out.dk_bound = out.applicable ? (std::numbers::pi / 2.0) * delta / out.gap : INFINITY;

  const double c = std::min(1.0, std::abs(v.vector.dot(w.vector)));
  out.projector_diff = std::sqrt(std::max(0.0, 1.0 - c * c));
  out.vector_dist = eigenvector_distance(v.vector, w.vector);
  return out;
}

void write_labels(std::ostream& out, const Labels& labels) {
  for (const int l : labels) out << l << '\n';
}

}  // namespace regspec
