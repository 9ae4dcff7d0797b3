#include "regspec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "regspec/community.hpp"
#include "regspec/core_residual.hpp"
#include "regspec/eigensolver.hpp"
#include "regspec/error.hpp"
#include "regspec/graph_model.hpp"
#include "regspec/linear_operator.hpp"
#include "regspec/norms_oracles.hpp"
#include "regspec/rng.hpp"
#include "regspec/spectral_core.hpp"

namespace regspec {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Concentration: return "concentration";
    case Experiment::Core: return "core";
    case Experiment::Residual: return "residual";
    case Experiment::Detection: return "detection";
    case Experiment::Cutnorm: return "cutnorm";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto e : {Experiment::Concentration, Experiment::Core, Experiment::Residual,
                       Experiment::Detection, Experiment::Cutnorm})
    if (to_string(e) == name) return e;
  throw InvalidArgument("unknown experiment '" + name + "'");
}

std::string TauSpec::label() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::Auto: return "auto";
    case Kind::Degree: return "d";
    case Kind::Fixed: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", ntau);
      return buf;
    }
  }
  return "";
}

TauSpec TauSpec::parse(const std::string& token) {
  if (token == "none") return {Kind::None, 0.0};
  if (token == "auto") return {Kind::Auto, 0.0};
  if (token == "d") return {Kind::Degree, 0.0};
  const double v = parse_double(token);
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidArgument("ntau must be none, auto, d or a positive number");
  return {Kind::Fixed, v};
}

SweepConfig sweep_config_from(Experiment experiment, const KeyValueConfig& cfg) {
  SweepConfig out;
  out.experiment = experiment;
  out.source = cfg;

  static const std::vector<std::string> known = {
      "n", "d", "ab", "ntau", "r", "replicates", "seed", "threads", "trim_constant",
      "trim_threshold", "mc_samples", "budget_seconds"};
  for (const auto& key : cfg.keys())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InvalidArgument("unknown config key '" + key + "'");

  if (!cfg.contains("n")) throw InvalidArgument("config needs n");
  const auto ns = cfg.get_ints("n");

  std::vector<std::pair<double, double>> models;
  if (cfg.contains("d"))
    for (const double d : cfg.get_doubles("d")) models.emplace_back(d, d);
  if (cfg.contains("ab")) {
    for (const auto& tok : cfg.values("ab")) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw InvalidArgument("ab entries look like a:b");
      models.emplace_back(parse_double(tok.substr(0, colon)), parse_double(tok.substr(colon + 1)));
    }
  }
  if (models.empty()) throw InvalidArgument("config needs d or ab");

  std::vector<TauSpec> taus;
  if (cfg.contains("ntau")) {
    for (const auto& tok : cfg.values("ntau")) taus.push_back(TauSpec::parse(tok));
  } else {
    taus.push_back(experiment == Experiment::Core || experiment == Experiment::Cutnorm
                       ? TauSpec{TauSpec::Kind::None, 0.0}
                       : TauSpec{TauSpec::Kind::Auto, 0.0});
  }

  for (const auto n : ns)
    for (const auto& [a, b] : models)
      for (const auto& t : taus) out.grid.push_back({static_cast<Index>(n), a, b, t});
  if (out.grid.empty()) throw InvalidArgument("empty grid");

  out.r = cfg.find_double("r").value_or(1.0);
  out.replicates = static_cast<int>(cfg.find_int("replicates").value_or(10));
  out.seed = cfg.contains("seed") ? cfg.get_u64("seed") : 1;
  out.threads = static_cast<int>(cfg.find_int("threads").value_or(1));
  out.trim_constant = cfg.find_double("trim_constant").value_or(30.0);
  out.trim_threshold = cfg.find_double("trim_threshold");
  out.mc_samples = static_cast<int>(cfg.find_int("mc_samples").value_or(64));
  out.budget_seconds = cfg.find_double("budget_seconds").value_or(600.0);
  if (out.replicates < 1) throw InvalidArgument("replicates must be >= 1");
  if (out.threads < 1) throw InvalidArgument("threads must be >= 1");
  if (!(out.r >= 1.0)) throw InvalidArgument("r must be >= 1");
  return out;
}

std::uint64_t replicate_seed(std::uint64_t seed, const GridPoint& point, int replicate) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(point.n));
  h = hash_combine(h, hash_double(point.a));
  h = hash_combine(h, hash_double(point.b));
  h = hash_combine(h, static_cast<std::uint64_t>(replicate));
  return seed ^ h;
}

const std::vector<std::string>& metric_names(Experiment e) {
  static const std::vector<std::string> concentration = {
      "norm", "d", "d0", "alpha", "ntau", "isolated", "shape", "ratio", "matvecs"};
  static const std::vector<std::string> core = {
      "d", "core_size", "removed", "budget", "threshold",
      "adj_full_ratio", "adj_core_ratio", "lap_full_scaled", "lap_core_scaled"};
  static const std::vector<std::string> residual = {
      "d", "ntau", "rows", "norm", "bound", "violation", "expected_norm",
      "expected_bound", "expected_violation", "max_row_ones", "max_col_ones",
      "max_row_pairs", "max_col_pairs", "line_bound", "part_i_violation",
      "part_ii_violation"};
  static const std::vector<std::string> detection = {
      "snr", "ntau", "misclassification", "lambda2", "vector_dist",
      "projector_diff", "norm_diff", "gap", "dk_bound", "dk_applicable"};
  static const std::vector<std::string> cutnorm = {
      "d", "value", "bound", "exceed", "exact", "tail_probability"};
  switch (e) {
    case Experiment::Concentration: return concentration;
    case Experiment::Core: return core;
    case Experiment::Residual: return residual;
    case Experiment::Detection: return detection;
    case Experiment::Cutnorm: return cutnorm;
  }
  return concentration;
}

std::string primary_metric(Experiment e) {
  switch (e) {
    case Experiment::Concentration: return "norm";
    case Experiment::Core: return "adj_core_ratio";
    case Experiment::Residual: return "norm";
    case Experiment::Detection: return "misclassification";
    case Experiment::Cutnorm: return "value";
  }
  return "norm";
}

double estimate_seconds(const SweepConfig& cfg) {
  double total = 0.0;
  for (const auto& p : cfg.grid) {
    const double n = static_cast<double>(p.n);
    const double nnz = n * (p.a + p.b) / 2.0 + n;
    const double lanczos = 2e-9 * (200.0 * nnz + 4e4 * n);
    double per = 0.0;
    switch (cfg.experiment) {
      case Experiment::Concentration: per = lanczos; break;
      case Experiment::Core: per = 8.0 * lanczos; break;
      case Experiment::Residual: per = 4.0 * lanczos; break;
      case Experiment::Detection: per = 4.0 * lanczos; break;
      case Experiment::Cutnorm:
        per = p.n <= 25 ? 2e-9 * std::ldexp(1.0, static_cast<int>(p.n) - 1) * n
                        : 2e-9 * cfg.mc_samples * 10.0 * nnz;
        break;
    }
    total += per * cfg.replicates;
  }
  return total;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Skip {
  std::string reason;
};

std::size_t metric_index(Experiment e, const std::string& name) {
  const auto& names = metric_names(e);
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

class Sink {
 public:
  Sink(Experiment e, std::vector<double>& values) : e_(e), values_(values) {
    values_.assign(metric_names(e).size(), kNaN);
  }
  void set(const std::string& name, double v) {
    const auto i = metric_index(e_, name);
    if (i >= values_.size()) throw InvalidArgument("unknown metric " + name);
    values_[i] = v;
  }

 private:
  Experiment e_;
  std::vector<double>& values_;
};

ProbabilityMatrix model_of(const GridPoint& p) {
  if (p.n < 2) throw Skip{"n must be >= 2"};
  if (!(p.b >= 0.0) || !(p.a >= p.b)) throw Skip{"requires a >= b >= 0"};
  if (p.a / static_cast<double>(p.n) > 1.0) throw Skip{"edge probability a/n exceeds 1"};
  if (!(p.a + p.b > 0.0)) throw Skip{"zero expected degrees (d0 undefined)"};
  if (p.a == p.b) return ProbabilityMatrix::constant(p.n, p.a / static_cast<double>(p.n));
  if (p.n % 2 != 0) throw Skip{"two-block model needs even n"};
  return sbm_prob_matrix(make_sbm_config(p.n, p.a, p.b));
}

Labels truth_of(const GridPoint& p) {
  return make_sbm_config(p.n, p.a, p.b).ground_truth;
}

double resolve_tau(const TauSpec& spec, const SparseAdjacency& a, double d) {
  const double n = static_cast<double>(a.size());
  switch (spec.kind) {
    case TauSpec::Kind::None: return 0.0;
    case TauSpec::Kind::Auto: {
      const double t = auto_tau(a);
      if (!(t > 0.0)) throw Skip{"auto tau is zero (empty graph)"};
      return t;
    }
    case TauSpec::Kind::Degree: return d / n;
    case TauSpec::Kind::Fixed: return spec.ntau / n;
  }
  return 0.0;
}

Regularization mode_for(double tau) {
  return tau > 0.0 ? Regularization::Full : Regularization::None;
}

double norm_of(const LinearOperator& op, std::uint64_t seed) {
  return operator_norm(op, 1e-8, seed);
}

void concentration(const SweepConfig& cfg, const GridPoint& p, std::uint64_t seed,
                   Record& rec, Sink& out) {
  const auto P = model_of(p);
  const auto params = model_params(P);
  const auto A = sample_graph(P, seed);
  rec.tau = resolve_tau(p.tau, A, params.d);
  const double ntau = static_cast<double>(p.n) * rec.tau;

  const auto la = make_operator(A, rec.tau, mode_for(rec.tau), OperatorKind::Laplacian);
  const auto lp = make_expected_operator(P, rec.tau, mode_for(rec.tau), OperatorKind::Laplacian);
  const DifferenceOperator diff(la, lp);
  EigOptions opt;
  opt.k = 1;
  opt.tol = 1e-8;
  opt.relative_tol = true;
  opt.which = Which::LargestMagnitude;
  opt.seed = derive_seed(seed, 11);
  const auto res = eig_symmetric(diff, opt);
  const double norm = std::abs(res.eigenvalues.front());

  Index isolated = 0;
  for (Index i = 0; i < A.size(); ++i) isolated += A.degree(i) == 0 ? 1 : 0;
  const double logd = std::log(params.d);
  const double shape = rec.tau > 0.0
                           ? cfg.r * params.alpha * params.alpha * logd * logd * logd *
                                 (1.0 / std::sqrt(params.d) + 1.0 / std::sqrt(ntau))
                           : INFINITY;
  out.set("norm", norm);
  out.set("d", params.d);
  out.set("d0", params.d0);
  out.set("alpha", params.alpha);
  out.set("ntau", ntau);
  out.set("isolated", static_cast<double>(isolated));
  out.set("shape", shape);
  out.set("ratio", rec.tau > 0.0 ? norm / shape : kNaN);
  out.set("matvecs", static_cast<double>(res.matvecs));
}

void core(const SweepConfig& cfg, const GridPoint& p, std::uint64_t seed, Record& rec,
          Sink& out) {
  const auto P = model_of(p);
  const auto params = model_params(P);
  const auto A = sample_graph(P, seed);
  rec.tau = resolve_tau(p.tau, A, params.d);
  const auto J = degree_trim_core(A, P, cfg.r, cfg.trim_constant, cfg.trim_threshold);

  const AdjacencyOperator adj(A);
  const ProbabilityOperator exp_adj(P);
  const DifferenceOperator adj_diff(adj, exp_adj);
  const auto adj_core = restrict(adj_diff, J.core, J.core);

  const auto la = make_operator(A, rec.tau, mode_for(rec.tau), OperatorKind::Laplacian);
  const auto lp = make_expected_operator(P, rec.tau, mode_for(rec.tau), OperatorKind::Laplacian);
  const DifferenceOperator lap_diff(la, lp);
  const auto lap_core = restrict(lap_diff, J.core, J.core);

  const double sd = std::sqrt(params.d);
  const double logd = std::log(params.d);
  const double lap_scale = sd / (params.alpha * params.alpha * logd * logd * logd);
  out.set("d", params.d);
  out.set("core_size", static_cast<double>(J.core.size()));
  out.set("removed", static_cast<double>(J.removed.size()));
  out.set("budget", J.budget);
  out.set("threshold", J.threshold);
  out.set("adj_full_ratio", norm_of(adj_diff, derive_seed(seed, 21)) / sd);
  out.set("adj_core_ratio", J.core.empty() ? 0.0 : norm_of(adj_core, derive_seed(seed, 22)) / sd);
  out.set("lap_full_scaled", norm_of(lap_diff, derive_seed(seed, 23)) * lap_scale);
  out.set("lap_core_scaled",
          J.core.empty() ? 0.0 : norm_of(lap_core, derive_seed(seed, 24)) * lap_scale);
}

void residual(const SweepConfig& cfg, const GridPoint& p, std::uint64_t seed, Record& rec,
              Sink& out) {
  const auto P = model_of(p);
  const auto params = model_params(P);
  if (!(params.d >= std::exp(1.0))) throw Skip{"residual bound needs d >= e"};
  if (p.tau.kind == TauSpec::Kind::None) throw Skip{"residual bound needs tau > 0"};
  const auto A = sample_graph(P, seed);
  rec.tau = resolve_tau(p.tau, A, params.d);
  const double ntau = static_cast<double>(p.n) * rec.tau;

  const auto rows = static_cast<Index>(std::floor(static_cast<double>(p.n) / params.d));
  const auto I = top_degree_vertices(A, rows);
  std::vector<Index> all(static_cast<std::size_t>(p.n));
  std::iota(all.begin(), all.end(), Index{0});

  const auto la = make_operator(A, rec.tau, Regularization::Full, OperatorKind::Averaging);
  const auto lp =
      make_expected_operator(P, rec.tau, Regularization::Full, OperatorKind::Averaging);
  const auto block = restrict(la, I, all);
  const auto expected_block = restrict(lp, I, all);
  const double norm = I.empty() ? 0.0 : norm_of(block, derive_seed(seed, 31));
  const double expected_norm = I.empty() ? 0.0 : norm_of(expected_block, derive_seed(seed, 32));
  const double bound = residual_norm_bound(params.d, cfg.r, p.n, rec.tau);
  const double expected_bound = expected_residual_bound(params.d, p.n, rec.tau);

  const auto dec = sparse_decompose(A, I, all, default_peel_threshold(cfg.r, params.d));
  const auto minmk = static_cast<Index>(std::min(I.size(), all.size()));
  const double line_bound = 20.0 * cfg.r * std::log(params.d);
  const bool part_i = dec.max_row_pairs > 2 * minmk || dec.max_col_pairs > 2 * minmk;
  const bool part_ii = static_cast<double>(std::max(dec.max_row_ones, dec.max_col_ones)) > line_bound;

  out.set("d", params.d);
  out.set("ntau", ntau);
  out.set("rows", static_cast<double>(I.size()));
  out.set("norm", norm);
  out.set("bound", bound);
  out.set("violation", norm > bound ? 1.0 : 0.0);
  out.set("expected_norm", expected_norm);
  out.set("expected_bound", expected_bound);
  out.set("expected_violation", expected_norm > expected_bound ? 1.0 : 0.0);
  out.set("max_row_ones", static_cast<double>(dec.max_row_ones));
  out.set("max_col_ones", static_cast<double>(dec.max_col_ones));
  out.set("max_row_pairs", static_cast<double>(dec.max_row_pairs));
  out.set("max_col_pairs", static_cast<double>(dec.max_col_pairs));
  out.set("line_bound", line_bound);
  out.set("part_i_violation", part_i ? 1.0 : 0.0);
  out.set("part_ii_violation", part_ii ? 1.0 : 0.0);
}

void detection(const SweepConfig&, const GridPoint& p, std::uint64_t seed, Record& rec,
               Sink& out) {
  const auto P = model_of(p);
  const auto params = model_params(P);
  if (p.tau.kind == TauSpec::Kind::None) throw Skip{"spectral clustering needs tau > 0"};
  if (p.n % 2 != 0) throw Skip{"two communities need even n"};
  const auto A = sample_graph(P, seed);
  rec.tau = resolve_tau(p.tau, A, params.d);

  const auto cluster = spectral_cluster(A, rec.tau, truth_of(p), derive_seed(seed, 41));
  out.set("snr", (p.a - p.b) * (p.a - p.b) / (p.a + p.b));
  out.set("ntau", static_cast<double>(p.n) * rec.tau);
  out.set("misclassification", *cluster.misclassification);
  out.set("lambda2", cluster.lambda2);
  if (p.a > p.b) {
    const auto sbm = sbm_prob_matrix(make_sbm_config(p.n, p.a, p.b));
    const auto dk = davis_kahan_report(A, sbm, rec.tau, derive_seed(seed, 42));
    out.set("vector_dist", dk.vector_dist);
    out.set("projector_diff", dk.projector_diff);
    out.set("norm_diff", dk.norm_diff);
    out.set("gap", dk.gap);
    out.set("dk_bound", dk.dk_bound);
    out.set("dk_applicable", dk.applicable ? 1.0 : 0.0);
  }
}

void cutnorm(const SweepConfig& cfg, const GridPoint& p, std::uint64_t seed, Record& rec,
             Sink& out) {
  const auto P = model_of(p);
  const auto params = model_params(P);
  const auto A = sample_graph(P, seed);
  rec.tau = 0.0;
  const double nd = static_cast<double>(p.n);
  const bool exact = p.n <= 25;
  double value = 0.0;
  if (exact) {
    value = inf_to_one_norm_exact(A.to_dense() - P.to_dense());
  } else {
    const AdjacencyOperator adj(A);
    const ProbabilityOperator exp_adj(P);
    const DifferenceOperator diff(adj, exp_adj);
    value = inf_to_one_norm_lower_bound(diff, cfg.mc_samples, derive_seed(seed, 51));
  }
  const double bound = 5.0 * cfg.r * nd * std::sqrt(params.d);
  out.set("d", params.d);
  out.set("value", value);
  out.set("bound", bound);
  out.set("exceed", value > bound ? 1.0 : 0.0);
  out.set("exact", exact ? 1.0 : 0.0);
  out.set("tail_probability", std::exp(-2.0 * cfg.r * nd));
}

}  // namespace

Record run_single(const SweepConfig& cfg, std::size_t grid_index, int replicate) {
  if (grid_index >= cfg.grid.size()) throw InvalidArgument("grid index out of range");
  Record rec;
  rec.grid_index = grid_index;
  rec.replicate = replicate;
  rec.point = cfg.grid[grid_index];
  rec.seed = replicate_seed(cfg.seed, rec.point, replicate);
  Sink sink(cfg.experiment, rec.values);
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (cfg.experiment) {
      case Experiment::Concentration: concentration(cfg, rec.point, rec.seed, rec, sink); break;
      case Experiment::Core: core(cfg, rec.point, rec.seed, rec, sink); break;
      case Experiment::Residual: residual(cfg, rec.point, rec.seed, rec, sink); break;
      case Experiment::Detection: detection(cfg, rec.point, rec.seed, rec, sink); break;
      case Experiment::Cutnorm: cutnorm(cfg, rec.point, rec.seed, rec, sink); break;
    }
  } catch (const Skip& s) {
    rec.status = "skipped: " + s.reason;
    Sink reset(cfg.experiment, rec.values);
  } catch (const Error& e) {
    rec.status = std::string("error: ") + e.what();
    Sink reset(cfg.experiment, rec.values);
  }
  rec.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

Quantiles quantiles(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return !std::isfinite(v); }),
               values.end());
  Quantiles q;
  q.count = values.size();
  if (values.empty()) {
    q.median = q.p05 = q.p95 = kNaN;
    return q;
  }
  std::sort(values.begin(), values.end());
  const auto at = [&](double prob) {
    const double pos = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  q.median = at(0.5);
  q.p05 = at(0.05);
  q.p95 = at(0.95);
  return q;
}

std::vector<GridSummary> summarize(const SweepConfig& cfg,
                                   const std::vector<std::string>& metrics,
                                   const std::vector<Record>& records) {
  std::vector<GridSummary> out(cfg.grid.size());
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    out[g].grid_index = g;
    out[g].point = cfg.grid[g];
  }
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    std::vector<std::vector<double>> per_point(cfg.grid.size());
    for (const auto& rec : records)
      if (rec.status == "ok") per_point[rec.grid_index].push_back(rec.values[m]);
    for (std::size_t g = 0; g < cfg.grid.size(); ++g)
      out[g].metrics[metrics[m]] = quantiles(per_point[g]);
  }
  return out;
}

ExperimentResult run_experiment(const SweepConfig& cfg, bool allow_long) {
  if (cfg.grid.empty()) throw InvalidArgument("empty grid");
  if (cfg.replicates < 1) throw InvalidArgument("replicates must be >= 1");
  const double estimate = estimate_seconds(cfg) / std::max(1, cfg.threads);
  if (!allow_long && estimate > cfg.budget_seconds) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "estimated runtime %.0f s exceeds the %.0f s budget; pass the override "
                  "flag to run anyway",
                  estimate, cfg.budget_seconds);
    throw BudgetExceeded(buf);
  }

  ExperimentResult result;
  result.config = cfg;
  result.metrics = metric_names(cfg.experiment);
  const std::size_t total = cfg.grid.size() * static_cast<std::size_t>(cfg.replicates);
  result.records.resize(total);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t t = next++; t < total; t = next++) {
      const auto g = t / static_cast<std::size_t>(cfg.replicates);
      const auto r = static_cast<int>(t % static_cast<std::size_t>(cfg.replicates));
      result.records[t] = run_single(cfg, g, r);
    }
  };
  const auto threads = static_cast<std::size_t>(std::min<std::size_t>(
      static_cast<std::size_t>(cfg.threads), total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  result.summaries = summarize(cfg, result.metrics, result.records);
  return result;
}

namespace {

ExperimentResult run_as(Experiment e, const SweepConfig& cfg, bool allow_long) {
  if (cfg.experiment != e) throw InvalidArgument("config is for experiment " + to_string(cfg.experiment));
  return run_experiment(cfg, allow_long);
}

}  // namespace

ExperimentResult run_concentration(const SweepConfig& cfg, bool allow_long) {
  return run_as(Experiment::Concentration, cfg, allow_long);
}
ExperimentResult run_core(const SweepConfig& cfg, bool allow_long) {
  return run_as(Experiment::Core, cfg, allow_long);
}
ExperimentResult run_residual(const SweepConfig& cfg, bool allow_long) {
  return run_as(Experiment::Residual, cfg, allow_long);
}
ExperimentResult run_detection(const SweepConfig& cfg, bool allow_long) {
  return run_as(Experiment::Detection, cfg, allow_long);
}
ExperimentResult run_cutnorm(const SweepConfig& cfg, bool allow_long) {
  return run_as(Experiment::Cutnorm, cfg, allow_long);
}

}  // namespace regspec
