#pragma once

// Regularized spectral clustering for two balanced communities.

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "regspec/graph_model.hpp"
#include "regspec/types.hpp"

namespace regspec {

/// tau = (d_1 + ... + d_n) / n^2, so n tau is the average degree.
double auto_tau(const SparseAdjacency& a);

struct ClusterResult {
  Labels labels;     ///< 1 where v_i >= 0, else 2
  Vector v;          ///< unit second eigenvector of L(A_tau)
  double lambda2 = 0.0;
  double tau = 0.0;
  std::optional<double> misclassification;
};

/// Labels from the signs of the second eigenvector of the regularized
/// Laplacian. Requires tau > 0.
ClusterResult spectral_cluster(const SparseAdjacency& a, double tau,
                               const std::optional<Labels>& truth = std::nullopt,
                               std::uint64_t seed = 0);

/// Fraction of disagreeing labels, minimized over a global swap of 1 and 2.
double misclassification_rate(const Labels& labels, const Labels& truth);

/// Second eigenvalue of L(P_tau) for a balanced two-block model:
/// (a - b) / (a + b + 2 n tau).
double sbm_lambda2(double a, double b, Index n, double tau);

/// Perturbation certificate for the second eigenvector.
struct DkReport {
  double lambda2 = 0.0;          ///< closed form for L(P_tau)
  double lambda2_computed = 0.0; ///< Lanczos on L(P_tau)
  double norm_diff = 0.0;        ///< ||L(A_tau) - L(P_tau)||
  double gap = 0.0;              ///< dist(S, S')
  bool applicable = false;       ///< gap > 0
  double dk_bound = 0.0;         ///< (pi/2) norm_diff / gap, +inf when inapplicable
  double projector_diff = 0.0;   ///< ||v v^T - w w^T||
  double vector_dist = 0.0;      ///< min over signs of ||v +- w||
};

/// S = (lambda2 - delta, max(4/5, lambda2) + delta) and
/// S' = (-delta, delta) u (1 - delta, 1 + delta) with delta = norm_diff.
/// Rejects P that is not a balanced two-block model. Requires tau > 0.
DkReport davis_kahan_report(const SparseAdjacency& a, const ProbabilityMatrix& p,
                            double tau, std::uint64_t seed = 0);

/// min(||v - w||, ||v + w||). Both inputs must be unit vectors (1e-8).
double eigenvector_distance(const Vector& v, const Vector& w);

/// One label per line.
void write_labels(std::ostream& out, const Labels& labels);

}  // namespace regspec
