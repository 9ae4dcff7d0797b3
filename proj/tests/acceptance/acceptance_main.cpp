// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fails.
//
//   regspec_acceptance [output-dir]
//
// Sweep CSV/JSON reports are written to output-dir (default
// ./acceptance_results) so every number printed here can be inspected.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "regspec/community.hpp"
#include "regspec/config.hpp"
#include "regspec/core_residual.hpp"
#include "regspec/eigensolver.hpp"
#include "regspec/experiments.hpp"
#include "regspec/graph_model.hpp"
#include "regspec/linear_operator.hpp"
#include "regspec/norms_oracles.hpp"
#include "regspec/rng.hpp"
#include "regspec/spectral_core.hpp"

using namespace regspec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int worker_threads() {
  return static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 4u));
}

std::string out_dir = "acceptance_results";

// Configs of the sweeps, kept so the determinism check can rerun them.
struct Sweep {
  Experiment experiment;
  std::string text;
  std::string csv;
};
std::vector<Sweep> sweeps;

ExperimentResult sweep(const std::string& tag, Experiment e, const std::string& text) {
  auto cfg = sweep_config_from(e, KeyValueConfig::parse(text));
  cfg.threads = worker_threads();
  auto res = run_experiment(cfg);
  sweeps.push_back({e, text, to_csv(res)});
  emit_report(res, out_dir + "/" + tag, false);
  return res;
}

std::vector<double> column(const ExperimentResult& res, std::size_t grid_index,
                           const std::string& metric) {
  const auto& names = res.metrics;
  const auto m = static_cast<std::size_t>(std::find(names.begin(), names.end(), metric) - names.begin());
  std::vector<double> out;
  for (const auto& rec : res.records)
    if (rec.grid_index == grid_index && rec.status == "ok") out.push_back(rec.values[m]);
  return out;
}

double median(const std::vector<double>& v) { return quantiles(v).median; }

std::size_t not_ok(const ExperimentResult& res) {
  return static_cast<std::size_t>(std::count_if(res.records.begin(), res.records.end(),
                                                [](const Record& r) { return r.status != "ok"; }));
}

// 1. Spectrum of the normalized Laplacian lies in [0, 2].
Outcome spectrum_validity() {
  int bad = 0, bad_zero = 0, dense_checked = 0;
  double lo = INFINITY, hi = -INFINITY, worst_zero = 0.0;
  for (int g = 0; g < 200; ++g) {
    const std::uint64_t seed = derive_seed(20240, static_cast<std::uint64_t>(g));
    const Index n = g % 4 == 0 ? 2000 : 40 + static_cast<Index>(mix64(seed) % 900) * 2;
    const bool er = g % 2 == 0;
    const double a = er ? 2.0 + g % 7 : 10.0 + g % 11, b = er ? a : 1.0 + g % 3;
    const auto P = er ? ProbabilityMatrix::constant(n, a / static_cast<double>(n))
                      : sbm_prob_matrix(make_sbm_config(n, a, b));
    const auto A = sample_graph(P, seed);
    const double tau = g % 3 == 0 ? 0.0 : auto_tau(A);
    const auto lap = make_operator(A, tau, tau > 0 ? Regularization::Full : Regularization::None,
                                   OperatorKind::Laplacian);
    EigOptions opt;
    opt.k = 1;
    opt.tol = 1e-11;
    opt.seed = seed;
    opt.which = Which::Smallest;
    const double smallest = eig_symmetric(lap, opt).eigenvalues.front();
    opt.which = Which::Largest;
    const double largest = eig_symmetric(lap, opt).eigenvalues.front();
    double s = smallest, l = largest;
    if (n <= 400) {
      const auto ev = oracle::eigenvalues_desc(materialize(lap));
      s = std::min(s, ev.minCoeff());
      l = std::max(l, ev.maxCoeff());
      ++dense_checked;
    }
    lo = std::min(lo, s);
    hi = std::max(hi, l);
    if (s < -1e-10 || l > 2.0 + 1e-10) ++bad;
    if (tau > 0) {
      worst_zero = std::max(worst_zero, std::abs(s));
      if (std::abs(s) > 1e-10) ++bad_zero;
    }
  }
  return {bad == 0 && bad_zero == 0,
          fmt("200 graphs (%d also dense), eigenvalues in [%.3g, %.12g], out of range %d, "
              "|smallest| max %.2g with tau>0 (violations %d)",
              dense_checked, lo, hi, bad, worst_zero, bad_zero)};
}

// 2. Lanczos against Jacobi, operator matvec against dense materialization.
Outcome oracle_equivalence() {
  oracle::TestRng rng(77);
  double worst_eig = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Index n = 5 + rng.below(196);
    const DenseMatrix m = oracle::random_symmetric(n, rng);
    const auto jac = jacobi_eigensolver(m);
    EigOptions opt;
    opt.k = 5;
    opt.tol = 1e-10;
    opt.seed = static_cast<std::uint64_t>(t);
    const auto res = eig_symmetric(DenseOperator(m, true), opt);
    for (Index i = 0; i < 5; ++i)
      worst_eig = std::max(worst_eig, std::abs(res.eigenvalues[static_cast<std::size_t>(i)] - jac.eigenvalues(i)));
  }
  double worst_mv = 0.0;
  for (int t = 0; t < 60; ++t) {
    const Index n = 1 + rng.below(64);
    const double tau = t % 4 == 0 ? 0.0 : rng.uniform() / static_cast<double>(n);
    const auto A = sample_graph(ProbabilityMatrix::constant(n, rng.uniform() * 0.4), static_cast<std::uint64_t>(t));
    const DenseMatrix reg = A.to_dense().array() + tau;
    const auto mode = tau > 0 ? Regularization::Full : Regularization::None;
    for (const auto kind : {OperatorKind::Laplacian, OperatorKind::Averaging}) {
      const auto op = make_operator(A, tau, mode, kind);
      const DenseMatrix want = kind == OperatorKind::Laplacian ? oracle::laplacian(reg) : oracle::averaging(reg);
      for (Index j = 0; j < n; ++j) {
        Vector x = Vector::Zero(n), y(n);
        x(j) = 1.0;
        op.apply(x, y);
        worst_mv = std::max(worst_mv, (y - want.col(j)).cwiseAbs().maxCoeff());
      }
    }
  }
  return {worst_eig <= 1e-8 && worst_mv <= 1e-12,
          fmt("max |lanczos - jacobi| = %.2e over 50 matrices; max matvec entry error = %.2e", worst_eig,
              worst_mv)};
}

// 3. Without regularization the deviation stays >= 1; regularization shrinks it.
Outcome regularization_effect() {
  const auto res = sweep("ac3", Experiment::Concentration,
                         "n = 2000\nd = 3\nntau = none, auto, 0.5, 1, 2, 4, 8\nreplicates = 50\nseed = 3\n");
  const auto none = column(res, 0, "norm");
  const auto at_least_one = std::count_if(none.begin(), none.end(), [](double v) { return v >= 1.0; });
  const double frac = static_cast<double>(at_least_one) / static_cast<double>(none.size());
  const double auto_med = median(column(res, 1, "norm"));
  std::vector<double> grid;
  for (std::size_t g = 2; g < 7; ++g) grid.push_back(median(column(res, g, "norm")));
  const bool monotone = std::is_sorted(grid.rbegin(), grid.rend());
  return {not_ok(res) == 0 && none.size() == 50 && frac >= 0.95 && auto_med < 0.9 && monotone,
          fmt("tau=0: %lld/50 with norm >= 1 (min %.6f); auto median %.4f; n*tau grid medians "
              "%.4f %.4f %.4f %.4f %.4f",
              static_cast<long long>(at_least_one), *std::min_element(none.begin(), none.end()), auto_med,
              grid[0], grid[1], grid[2], grid[3], grid[4])};
}

// 4. Log-log slope of the median deviation in d at n tau = d.
Outcome sqrt_d_shape() {
  const auto res = sweep("ac4", Experiment::Concentration,
                         "n = 4000\nd = 4, 8, 16, 32, 64\nntau = d\nreplicates = 20\nseed = 4\n");
  std::vector<double> x, y;
  for (std::size_t g = 0; g < 5; ++g) {
    x.push_back(std::log(res.config.grid[g].a));
    y.push_back(std::log(median(column(res, g, "norm"))));
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / 5, my = std::accumulate(y.begin(), y.end(), 0.0) / 5;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 5; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {not_ok(res) == 0 && slope >= -0.7 && slope <= -0.3,
          fmt("slope %.4f; medians %.4f %.4f %.4f %.4f %.4f", slope, std::exp(y[0]), std::exp(y[1]),
              std::exp(y[2]), std::exp(y[3]), std::exp(y[4]))};
}

// 5. Exact cut norm of A - EA against 5 r n sqrt(d).
Outcome cutnorm_bound() {
  const auto res = sweep("ac5", Experiment::Cutnorm, "n = 20\nd = 5\nr = 1\nreplicates = 500\nseed = 5\n");
  const auto exceed = column(res, 0, "exceed");
  const auto values = column(res, 0, "value");
  const auto exact = column(res, 0, "exact");
  const double bound = column(res, 0, "bound").front();
  const double violations = std::accumulate(exceed.begin(), exceed.end(), 0.0);
  const bool all_exact = std::all_of(exact.begin(), exact.end(), [](double v) { return v == 1.0; });
  return {not_ok(res) == 0 && values.size() == 500 && all_exact && violations == 0,
          fmt("500 exact enumerations, max %.4f vs bound %.4f, violations %.0f",
              *std::max_element(values.begin(), values.end()), bound, violations)};
}

// 6. Exhaustive sub-matrix search always finds a certificate.
Outcome grothendieck() {
  oracle::TestRng rng(66);
  int missing = 0;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    DenseMatrix b(6, 6);
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 6; ++j)
        b(i, j) = t % 3 == 0 ? (rng.below(2) ? 1.0 : -1.0) : t % 3 == 1 ? rng.symmetric() : rng.below(4) == 0 ? rng.uniform() : 0.0;
    const auto cert = grothendieck_submatrix_search(b, 0.5);
    if (!cert.found) ++missing;
    if (cert.bound > 0) worst = std::max(worst, cert.opnorm / cert.bound);
  }
  return {missing == 0, fmt("1000 matrices, counterexamples %d, largest opnorm/bound %.4f", missing, worst)};
}

// 7. Sparse decomposition: structure and ones per line.
Outcome sparse_decomposition() {
  const Index n = 2000;
  const double d = 8.0, r = 1.0;
  const double line_bound = 20.0 * r * std::log(d);
  const auto P = ProbabilityMatrix::constant(n, d / static_cast<double>(n));
  int part_i = 0, part_ii = 0, cover = 0, blocks = 0;
  Index max_ones = 0;
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{0});
  for (int g = 0; g < 100; ++g) {
    const std::uint64_t seed = derive_seed(7007, static_cast<std::uint64_t>(g));
    const auto A = sample_graph(P, seed);
    const auto m = static_cast<Index>(n / d);
    oracle::TestRng rng(seed);
    std::vector<Index> random_rows, random_cols;
    for (Index i = 0; i < n; ++i) {
      if (rng.below(8) == 0) random_rows.push_back(i);
      if (rng.below(2) == 0) random_cols.push_back(i);
    }
    const auto top = top_degree_vertices(A, m);
    const std::vector<std::pair<std::vector<Index>, std::vector<Index>>> cases = {
        {top, all}, {all, top}, {random_rows, random_cols}, {top, top}};
    for (const auto& [I, J] : cases) {
      const auto dec = sparse_decompose(A, I, J, default_peel_threshold(r, d));
      ++blocks;
      const auto minmk = std::min(dec.rows.size(), dec.cols.size());
      if (static_cast<std::size_t>(std::max(dec.max_row_pairs, dec.max_col_pairs)) > 2 * minmk) ++part_i;
      IndexPairSet u = dec.R;
      u.insert(u.end(), dec.C.begin(), dec.C.end());
      std::sort(u.begin(), u.end());
      if (u != block_pairs(dec.rows, dec.cols)) ++cover;
      const Index ones = std::max(dec.max_row_ones, dec.max_col_ones);
      max_ones = std::max(max_ones, ones);
      if (static_cast<double>(ones) > line_bound) ++part_ii;
    }
  }
  return {part_i == 0 && cover == 0 && part_ii == 0,
          fmt("%d blocks on 100 graphs: cover/disjointness failures %d, part (i) failures %d, "
              "part (ii) failures %d (max ones per line %lld vs %.2f)",
              blocks, cover, part_i, part_ii, static_cast<long long>(max_ones), line_bound)};
}

// 8. Restriction of the averaging operator.
Outcome restriction_lemma() {
  oracle::TestRng rng(88);
  int violations = 0;
  double worst = -INFINITY;
  for (int t = 0; t < 1000; ++t) {
    const Index n = 2 + rng.below(30);
    DenseMatrix b(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = i; j < n; ++j) b(i, j) = b(j, i) = rng.below(2) ? rng.uniform() : 0.0;
    for (Index i = 0; i < n; ++i)
      if (b.row(i).sum() == 0.0) b(i, i) = 1.0;
    IndexPairSet s;
    const int density = 1 + rng.below(5);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (rng.below(density) == 0) s.emplace_back(i, j);
    const auto chk = restriction_bound_check(b, s);
    if (!chk.holds) ++violations;
    worst = std::max(worst, chk.lhs - std::sqrt(chk.eps));
  }
  return {violations == 0, fmt("1000 trials, violations %d, max lhs - sqrt(eps) = %.3g", violations, worst)};
}

// 9. Residual bound on the n/d highest-degree rows.
ExperimentResult residual_result;
Outcome residual_bound() {
  residual_result = sweep("ac9", Experiment::Residual, "n = 2000\nd = 8\nntau = auto\nr = 1\nreplicates = 100\nseed = 9\n");
  const auto viol = column(residual_result, 0, "violation");
  const auto norms = column(residual_result, 0, "norm");
  const auto bounds = column(residual_result, 0, "bound");
  const double v = std::accumulate(viol.begin(), viol.end(), 0.0);
  return {not_ok(residual_result) == 0 && viol.size() == 100 && v == 0,
          fmt("100 graphs, violations %.0f, max norm %.4f, min bound %.4f", v,
              *std::max_element(norms.begin(), norms.end()), *std::min_element(bounds.begin(), bounds.end()))};
}

// 10a. Second eigenvalue of the expected averaging operator against the
// stated closed form (a - b)/(a + b + n tau).
Outcome lambda2_formula() {
  const Index n = 2000;
  const double a = 40, b = 5;
  const auto P = sbm_prob_matrix(make_sbm_config(n, a, b));
  double worst_stated = 0.0, worst_corrected = 0.0;
  for (const double ntau : {1.0, 5.0, 22.5, 100.0}) {
    const double tau = ntau / static_cast<double>(n);
    const auto op = make_expected_operator(P, tau, Regularization::Full, OperatorKind::Averaging);
    const double computed = second_eigenvector(op, 1, 1e-12).value;
    worst_stated = std::max(worst_stated, std::abs(computed - (a - b) / (a + b + ntau)));
    worst_corrected = std::max(worst_corrected, std::abs(computed - sbm_lambda2(a, b, n, tau)));
  }
  return {worst_stated <= 1e-10,
          fmt("n tau in {1, 5, 22.5, 100}: max |computed - (a-b)/(a+b+n tau)| = %.4g; "
              "max |computed - (a-b)/(a+b+2 n tau)| = %.2g",
              worst_stated, worst_corrected)};
}

// 10b. vector_dist <= sqrt2 projector_diff <= sqrt2 (pi/2) norm_diff / gap.
struct ChainCount {
  int samples = 0, applicable = 0, first = 0, second = 0;
};

ChainCount chain(const ExperimentResult& res) {
  ChainCount c;
  const auto vd = column(res, 0, "vector_dist"), pd = column(res, 0, "projector_diff"),
             dk = column(res, 0, "dk_bound"), ap = column(res, 0, "dk_applicable");
  for (std::size_t i = 0; i < vd.size(); ++i) {
    ++c.samples;
    c.applicable += ap[i] == 1.0;
    // A non-positive separation leaves the bound infinite (dk_bound = inf).
    if (vd[i] > std::numbers::sqrt2 * pd[i] + 2e-8) ++c.first;
    if (std::numbers::sqrt2 * pd[i] > std::numbers::sqrt2 * dk[i] + 2e-8) ++c.second;
  }
  return c;
}

Outcome davis_kahan_chain() {
  const auto main = sweep("ac10_40_5", Experiment::Detection, "n = 2000\nab = 40:5\nntau = auto\nreplicates = 100\nseed = 10\n");
  const auto c = chain(main);
  const auto gaps = column(main, 0, "gap");
  const auto dense = sweep("ac10_320_40", Experiment::Detection, "n = 2000\nab = 320:40\nntau = auto\nreplicates = 20\nseed = 10\n");
  const auto s = chain(dense);
  return {not_ok(main) == 0 && not_ok(dense) == 0 && c.samples == 100 && c.first == 0 && c.second == 0 &&
              s.first == 0 && s.second == 0,
          fmt("(40,5): 100 samples, chain failures %d/%d, bound finite on %d/100 (max gap %.4f, "
              "median norm_diff %.4f); (320,40): bound finite on %d/20, chain failures %d/%d",
              c.first, c.second, c.applicable, *std::max_element(gaps.begin(), gaps.end()),
              median(column(main, 0, "norm_diff")), s.applicable, s.first, s.second)};
}

// 11. Misclassification on both sides of the detection threshold.
Outcome detection_phase() {
  const auto res = sweep("ac11", Experiment::Detection, "n = 4000\nab = 40:5, 10:8\nntau = auto\nreplicates = 50\nseed = 11\n");
  const double strong = median(column(res, 0, "misclassification"));
  const double weak = median(column(res, 1, "misclassification"));
  return {not_ok(res) == 0 && strong < 0.05 && std::abs(weak - 0.5) <= 0.05,
          fmt("median misclassification %.4f at (40,5) [snr %.1f], %.4f at (10,8) [snr %.2f]", strong,
              35.0 * 35.0 / 45.0, weak, 4.0 / 18.0)};
}

// 12. Every sweep above reproduces its CSV byte for byte, also with a
// different worker count.
Outcome determinism() {
  int mismatches = 0;
  std::size_t bytes = 0;
  for (const auto& s : sweeps) {
    auto cfg = sweep_config_from(s.experiment, KeyValueConfig::parse(s.text));
    cfg.threads = worker_threads() == 1 ? 3 : 1;
    const auto again = to_csv(run_experiment(cfg));
    if (again != s.csv) ++mismatches;
    bytes += again.size();
  }
  return {mismatches == 0 && !sweeps.empty(),
          fmt("%zu sweeps rerun (%zu bytes of CSV), mismatches %d", sweeps.size(), bytes, mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) out_dir = argv[1];
  struct Criterion {
    const char* id;
    const char* name;
    double limit_seconds;  // 0 = none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"AC1", "spectrum validity", 120, spectrum_validity},
      {"AC2", "oracle equivalence", 0, oracle_equivalence},
      {"AC3", "regularization effect", 300, regularization_effect},
      {"AC4", "1/sqrt(d) shape", 0, sqrt_d_shape},
      {"AC5", "cut-norm bound", 180, cutnorm_bound},
      {"AC6", "Grothendieck sub-matrix", 0, grothendieck},
      {"AC7", "sparse decomposition", 0, sparse_decomposition},
      {"AC8", "restriction bound", 0, restriction_lemma},
      {"AC9", "residual bound", 0, residual_bound},
      {"AC10a", "lambda2 closed form (a-b)/(a+b+n tau)", 0, lambda2_formula},
      {"AC10b", "Davis-Kahan chain", 0, davis_kahan_chain},
      {"AC11", "detection phase behavior", 600, detection_phase},
      {"AC12", "determinism", 0, determinism},
  };
  std::printf("worker threads: %d\n", worker_threads());
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.pass = false;
      o.detail += fmt(" [over the %.0f s limit]", c.limit_seconds);
    }
    failed += o.pass ? 0 : 1;
    std::printf("%-5s %s  %s: %s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
