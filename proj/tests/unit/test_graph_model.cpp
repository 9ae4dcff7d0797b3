#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "regspec/config.hpp"
#include "regspec/error.hpp"
#include "regspec/graph_model.hpp"
#include "regspec/rng.hpp"
#include "regspec/spectral_core.hpp"

using namespace regspec;

TEST(SbmProbMatrix, SmallBlocks) {
  const auto p = sbm_prob_matrix(make_sbm_config(4, 2, 1)).to_dense();
  DenseMatrix want(4, 4);
  want << 0.5, 0.5, 0.25, 0.25,
          0.5, 0.5, 0.25, 0.25,
          0.25, 0.25, 0.5, 0.5,
          0.25, 0.25, 0.5, 0.5;
  EXPECT_EQ(p, want);
}

TEST(SbmProbMatrix, EqualRatesIsErdosRenyi) {
  const auto p = sbm_prob_matrix(make_sbm_config(10, 3, 3)).to_dense();
  EXPECT_TRUE((p.array() == 0.3).all());
}

TEST(SbmProbMatrix, MinColumnSum) {
  // Independent oracle: plain column sums of the materialized matrix.
  const auto p = sbm_prob_matrix(make_sbm_config(1000, 20, 5)).to_dense();
  double mn = INFINITY;
  for (Index j = 0; j < p.cols(); ++j) mn = std::min(mn, p.col(j).sum());
  EXPECT_NEAR(mn, 12.5, 1e-9);
  EXPECT_NEAR(model_params(sbm_prob_matrix(make_sbm_config(1000, 20, 5))).d0, 12.5, 1e-12);
}

TEST(SbmProbMatrix, RejectsBadConfigs) {
  EXPECT_THROW(make_sbm_config(5, 2, 1), InvalidArgument);
  EXPECT_THROW(make_sbm_config(4, 5, 1), InvalidArgument);
  EXPECT_THROW(make_sbm_config(4, 1, 2), InvalidArgument);
  EXPECT_THROW(make_sbm_config(4, 2, -1), InvalidArgument);
}

TEST(SbmProbMatrix, PermutationMovesLabels) {
  const std::vector<Index> perm = {3, 2, 1, 0};
  const auto cfg = make_sbm_config(4, 2, 1, perm);
  const Labels want = {2, 2, 1, 1};
  EXPECT_EQ(cfg.ground_truth, want);
  const auto p = sbm_prob_matrix(cfg);
  EXPECT_EQ(p(0, 1), 0.5);
  EXPECT_EQ(p(0, 3), 0.25);
  EXPECT_THROW(make_sbm_config(4, 2, 1, std::vector<Index>{0, 0, 1, 2}), InvalidArgument);
}

TEST(SbmProbMatrix, ConfigFile) {
  const auto kv = KeyValueConfig::parse("n = 6\na = 3\nb = 1\nseed = 5\npermutation = random\n");
  const auto cfg = sbm_config_from(kv);
  EXPECT_EQ(cfg.n, 6);
  int ones = 0;
  for (const int l : cfg.ground_truth) ones += l == 1;
  EXPECT_EQ(ones, 3);
  EXPECT_EQ(cfg.ground_truth, sbm_config_from(kv).ground_truth);
}

TEST(SampleGraph, ZeroAndOneProbabilities) {
  const auto empty = sample_graph(ProbabilityMatrix::constant(7, 0.0), 1);
  EXPECT_EQ(empty.nnz(), 0);
  for (const Index d : empty.degrees()) EXPECT_EQ(d, 0);

  const auto full = sample_graph(ProbabilityMatrix::constant(7, 1.0), 1);
  for (const Index d : full.degrees()) EXPECT_EQ(d, 7);
  const auto full_dense = sample_graph(ProbabilityMatrix::dense(DenseMatrix::Ones(5, 5)), 1);
  for (const Index d : full_dense.degrees()) EXPECT_EQ(d, 5);
}

TEST(SampleGraph, SymmetricBinaryAndReproducible) {
  const auto p = sbm_prob_matrix(make_sbm_config(300, 12, 3));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = sample_graph(p, seed);
    const auto dense = a.to_dense();
    EXPECT_EQ(dense, dense.transpose());
    EXPECT_TRUE(((dense.array() == 0.0) || (dense.array() == 1.0)).all());
    EXPECT_EQ(a, sample_graph(p, seed));
    // Degrees equal a direct recount of the dense matrix.
    for (Index i = 0; i < a.size(); ++i) EXPECT_EQ(a.degree(i), static_cast<Index>(dense.row(i).sum()));
  }
  EXPECT_FALSE(sample_graph(p, 1) == sample_graph(p, 2));
}

TEST(SampleGraph, DenseAndBlockFormsAgreeInDistribution) {
  // Dense form draws per entry, block form skips geometrically; both must
  // give the same expected edge count.
  const auto cfg = make_sbm_config(60, 10, 4);
  const auto block = sbm_prob_matrix(cfg);
  const auto dense = ProbabilityMatrix::dense(block.to_dense());
  double sb = 0, sd = 0;
  const int reps = 400;
  for (int s = 0; s < reps; ++s) {
    sb += static_cast<double>(sample_graph(block, derive_seed(1, s)).nnz());
    sd += static_cast<double>(sample_graph(dense, derive_seed(2, s)).nnz());
  }
  const double expect = block.to_dense().sum();
  // sd of nnz is below sqrt(4 * expect); mean over reps shrinks it by sqrt(reps).
  const double tol = 4.0 * std::sqrt(4.0 * expect) / std::sqrt(reps);
  EXPECT_NEAR(sb / reps, expect, tol);
  EXPECT_NEAR(sd / reps, expect, tol);
}

TEST(SampleGraph, TotalDegreeConcentration) {
  const Index n = 2000;
  const double a = 20, b = 5;
  const auto p = sbm_prob_matrix(make_sbm_config(n, a, b));
  // Exact mean and variance of sum_ij A_ij with loops counted once.
  const double pa = a / n, pb = b / n;
  const double half = n / 2.0;
  const double mean = n * (a + b) / 2.0;
  const double pairs_same = 2.0 * half * (half - 1) / 2.0, pairs_cross = half * half;
  const double var = 4.0 * (pairs_same * pa * (1 - pa) + pairs_cross * pb * (1 - pb)) +
                     n * pa * (1 - pa);
  const int reps = 200;
  double total = 0.0;
  for (int s = 0; s < reps; ++s) total += static_cast<double>(sample_graph(p, derive_seed(99, s)).nnz());
  EXPECT_NEAR(total / reps, mean, 3.0 * std::sqrt(var / reps));
}

TEST(ModelParams, HomogeneousAndSbm) {
  const auto er = model_params(ProbabilityMatrix::constant(100, 0.05));
  EXPECT_NEAR(er.d, 5.0, 1e-12);
  EXPECT_NEAR(er.d0, 5.0, 1e-12);
  EXPECT_NEAR(er.alpha, 1.0, 1e-12);

  const auto sbm = model_params(sbm_prob_matrix(make_sbm_config(1000, 20, 5)));
  EXPECT_NEAR(sbm.d, 20.0, 1e-12);
  EXPECT_NEAR(sbm.d0, 12.5, 1e-12);
  EXPECT_NEAR(sbm.alpha, 1.6, 1e-12);
}

TEST(ModelParams, DEqualsMaxOfRates) {
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{7, 2}, {3, 3}, {40, 5}}) {
    const auto p = sbm_prob_matrix(make_sbm_config(200, a, b));
    EXPECT_NEAR(model_params(p).d, std::max(a, b), 1e-12);
    EXPECT_NEAR(model_params(p).d, 200 * p.to_dense().maxCoeff(), 1e-12);
  }
}

TEST(ModelParams, ZeroColumnRejected) {
  DenseMatrix m = DenseMatrix::Constant(4, 4, 0.2);
  m.row(2).setZero();
  m.col(2).setZero();
  EXPECT_THROW(model_params(ProbabilityMatrix::dense(m)), ModelError);
}

TEST(ProbabilityMatrix, MultiplyMatchesDense) {
  const auto p = sbm_prob_matrix(make_sbm_config(40, 6, 2, random_permutation(40, 3)));
  oracle::TestRng rng(5);
  Vector x(40), y(40);
  for (Index i = 0; i < 40; ++i) x(i) = rng.symmetric();
  p.multiply(x, y);
  EXPECT_LT((y - p.to_dense() * x).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ProbabilityMatrix, DenseValidation) {
  DenseMatrix m = DenseMatrix::Constant(3, 3, 0.1);
  m(0, 1) = 0.2;
  EXPECT_THROW(ProbabilityMatrix::dense(m), InvalidArgument);
  EXPECT_THROW(ProbabilityMatrix::constant(3, 1.5), InvalidArgument);
}

TEST(SparseAdjacency, FromEdgesAndQueries) {
  const IndexPairSet edges = {{0, 1}, {2, 1}, {3, 3}};
  const auto a = SparseAdjacency::from_edges(4, edges);
  EXPECT_EQ(a.edge_count(), 3);
  EXPECT_EQ(a.nnz(), 5);
  EXPECT_TRUE(a.has_edge(1, 2));
  EXPECT_TRUE(a.has_edge(3, 3));
  EXPECT_FALSE(a.has_edge(0, 2));
  const std::vector<Index> want = {1, 2, 1, 1};
  EXPECT_EQ(a.degrees(), want);
  const IndexPairSet upper = {{0, 1}, {1, 2}, {3, 3}};
  EXPECT_EQ(a.edges(), upper);
  EXPECT_THROW(SparseAdjacency::from_edges(4, IndexPairSet{{0, 1}, {1, 0}}), InvalidArgument);
  EXPECT_THROW(SparseAdjacency::from_edges(4, IndexPairSet{{0, 4}}), InvalidArgument);
}

TEST(EdgeList, RoundTrip) {
  const auto a = sample_graph(sbm_prob_matrix(make_sbm_config(50, 8, 2)), 4);
  std::stringstream ss;
  write_edge_list(ss, a);
  EXPECT_EQ(read_edge_list(ss, 50), a);
  std::stringstream bad("0 1\n2\n");
  EXPECT_THROW(read_edge_list(bad, 5), InvalidArgument);
}
