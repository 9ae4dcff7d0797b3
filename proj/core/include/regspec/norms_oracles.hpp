#pragma once

// Exact brute-force oracles used to certify the fast paths at small scale:
// the l_inf -> l_1 (cut) norm by sign enumeration, a cyclic Jacobi
// eigensolver for dense symmetric matrices, and an exhaustive search for
// well-conditioned sub-matrices.

#include <cstdint>
#include <vector>

#include "regspec/graph_model.hpp"
#include "regspec/types.hpp"

namespace regspec {

class LinearOperator;

struct JacobiResult {
  Vector eigenvalues;       ///< descending
  DenseMatrix eigenvectors; ///< columns match eigenvalues
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a dense symmetric matrix.
JacobiResult jacobi_eigensolver(const DenseMatrix& symmetric, double tol = 1e-15,
                                int max_sweeps = 100);

/// max over x in {-1,1}^m, y in {-1,1}^k of x^T B y. Enumerates the smaller
/// side with Gray-code updates; the other side is sign(B^T x). Throws
/// BudgetExceeded when min(m, k) > 25.
double inf_to_one_norm_exact(const DenseMatrix& b);

/// Lower bound on ||M||_{inf->1} for an operator M by alternating sign
/// maximization from `samples` random starts.
double inf_to_one_norm_lower_bound(const LinearOperator& m, int samples,
                                   std::uint64_t seed);

/// Largest singular value via Jacobi (on B itself when symmetric, else on
/// the smaller Gram matrix). Limited to m, k <= 512.
double spectral_norm_dense(const DenseMatrix& b);

/// Outcome of the exhaustive sub-matrix search. When `found` is false the
/// fields describe the best (smallest opnorm / bound) pair examined, which is
/// a counterexample report.
struct GrothendieckCert {
  bool found = false;
  std::vector<Index> rows;
  std::vector<Index> cols;
  double opnorm = 0.0;
  double bound = 0.0;
  double delta = 0.0;
  double cut_norm = 0.0;
};

/// Searches row/column subsets with |I| >= (1 - delta) m, |J| >= (1 - delta) k,
/// largest |I| + |J| first (ties lexicographic), for one with
/// ||B_{I x J}|| <= 2 ||B||_{inf->1} / (delta sqrt(mk)). Requires m, k <= 8.
GrothendieckCert grothendieck_submatrix_search(const DenseMatrix& b, double delta);

struct CutnormReport {
  bool exact = false;
  double bound = 0.0;              ///< 5 r n sqrt(d)
  double tail_probability = 0.0;   ///< exp(-2 r n)
  std::vector<double> values;      ///< per replicate (exact or lower bound)
  std::vector<std::uint64_t> seeds;
  Index exceedances = 0;
  double exceed_fraction = 0.0;
};

/// Per-replicate ||A - EA||_{inf->1} for graphs sampled from `p`, compared
/// with 5 r n sqrt(d). Exact enumeration for n <= 25, otherwise a Monte
/// Carlo lower bound with `mc_samples` starts.
CutnormReport cutnorm_concentration_check(const ProbabilityMatrix& p, double r,
                                          int replicates, std::uint64_t seed,
                                          int mc_samples = 64);

}  // namespace regspec
