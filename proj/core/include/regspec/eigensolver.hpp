#pragma once

#include <cstdint>
#include <vector>

#include "regspec/linear_operator.hpp"

namespace regspec {

enum class Which {
  Largest,           ///< largest algebraic values
  Smallest,          ///< smallest algebraic values
  LargestMagnitude,  ///< largest |value|
};

struct EigOptions {
  Index k = 1;
  /// Residual tolerance ||M v - lambda v||_2. Absolute unless
  /// `relative_tol`, in which case it is scaled by |lambda|.
  double tol = 1e-10;
  bool relative_tol = false;
  std::uint64_t seed = 0;
  Which which = Which::Largest;
  /// Krylov basis size before a thick restart.
  Index max_basis = 300;
  int max_restarts = 200;
  bool check_symmetry = true;
  /// After convergence, rerun on the complement of the pairs found so far
  /// until it yields nothing that enters the top k. Single-vector Lanczos
  /// sees one copy of a repeated eigenvalue per start vector, so this is
  /// what recovers multiplicities.
  bool check_multiplicity = false;
};

/// Converged eigenpairs ordered by the selection rule (descending for
/// Which::Largest). Eigenvectors are orthonormal columns.
struct SpectralResult {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;
  std::vector<double> residuals;
  Index matvecs = 0;
  int restarts = 0;
};

/// Thick-restart Lanczos with full reorthogonalization.
///
/// The start vector is derived from `seed`, so results are deterministic.
/// An invariant subspace (breakdown) is continued with a fresh random
/// direction orthogonal to the basis. Repeated eigenvalues are only
/// guaranteed with `check_multiplicity`. Throws NonConvergence after
/// `max_restarts` cycles.
SpectralResult eig_symmetric(const LinearOperator& op, const EigOptions& options);

/// Probabilistic symmetry test |x^T(My) - y^T(Mx)| <= 1e-10 * scale on
/// `trials` random unit pairs.
bool looks_symmetric(const LinearOperator& op, std::uint64_t seed, int trials = 3);

/// Spectral norm estimate. Symmetric operators: max |lambda| via Lanczos.
/// Otherwise: sqrt of the top eigenvalue of M^T M. `tol` is the relative
/// residual tolerance.
double operator_norm(const LinearOperator& op, double tol = 1e-8,
                     std::uint64_t seed = 0);

}  // namespace regspec
