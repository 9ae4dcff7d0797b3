#pragma once

// Seeded Monte Carlo sweeps over (n, model, tau) grids and their reports.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regspec/config.hpp"
#include "regspec/types.hpp"

namespace regspec {

enum class Experiment { Concentration, Core, Residual, Detection, Cutnorm };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

/// Regularization choice of a grid point.
///   none   tau = 0, isolated vertices zeroed
///   auto   tau = (sum of degrees) / n^2 per replicate
///   degree n tau = d of the model
///   fixed  n tau = value
struct TauSpec {
  enum class Kind { None, Auto, Degree, Fixed };
  Kind kind = Kind::Auto;
  double ntau = 0.0;

  std::string label() const;
  static TauSpec parse(const std::string& token);
};

/// G(n, a/n, b/n); a == b is Erdos-Renyi with d = a.
struct GridPoint {
  Index n = 0;
  double a = 0.0;
  double b = 0.0;
  TauSpec tau;
};

struct SweepConfig {
  Experiment experiment = Experiment::Concentration;
  std::vector<GridPoint> grid;
  double r = 1.0;
  int replicates = 10;
  std::uint64_t seed = 1;
  int threads = 1;
  double trim_constant = 30.0;
  std::optional<double> trim_threshold;
  int mc_samples = 64;
  double budget_seconds = 600.0;
  KeyValueConfig source;  ///< echoed into reports
};

/// Keys: n (list), d (list, Erdos-Renyi), ab (list of a:b), ntau (list of
/// none | auto | d | number), r, replicates, seed, threads, trim_constant,
/// trim_threshold, mc_samples, budget_seconds. The grid is the product
/// n x (d then ab) x ntau in that nesting order.
SweepConfig sweep_config_from(Experiment experiment, const KeyValueConfig& cfg);

/// Seed of one replicate: depends on (seed, n, a, b, replicate) only, so
/// adding or dropping grid points leaves the other samples unchanged and a
/// tau sweep reuses the same graphs.
std::uint64_t replicate_seed(std::uint64_t seed, const GridPoint& point, int replicate);

struct Record {
  std::size_t grid_index = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  GridPoint point;
  double tau = 0.0;            ///< resolved value
  std::string status = "ok";   ///< "ok", "skipped: ..." or "error: ..."
  std::vector<double> values;  ///< aligned with metric_names(experiment)
  double runtime_seconds = 0.0;
};

struct Quantiles {
  double median = 0.0;
  double p05 = 0.0;
  double p95 = 0.0;
  std::size_t count = 0;
};

struct GridSummary {
  std::size_t grid_index = 0;
  GridPoint point;
  std::map<std::string, Quantiles> metrics;
};

struct ExperimentResult {
  SweepConfig config;
  std::vector<std::string> metrics;
  std::vector<Record> records;  ///< ordered by (grid index, replicate)
  std::vector<GridSummary> summaries;
};

const std::vector<std::string>& metric_names(Experiment e);

/// Headline metric used in console summaries and plots.
std::string primary_metric(Experiment e);

/// Rough single-thread cost in seconds, used by the runtime budget guard.
double estimate_seconds(const SweepConfig& cfg);

/// Runs every (grid point, replicate) on a pool of cfg.threads workers.
/// Throws BudgetExceeded when estimate_seconds / threads exceeds
/// cfg.budget_seconds and `allow_long` is false.
ExperimentResult run_experiment(const SweepConfig& cfg, bool allow_long = false);

ExperimentResult run_concentration(const SweepConfig& cfg, bool allow_long = false);
ExperimentResult run_core(const SweepConfig& cfg, bool allow_long = false);
ExperimentResult run_residual(const SweepConfig& cfg, bool allow_long = false);
ExperimentResult run_detection(const SweepConfig& cfg, bool allow_long = false);
ExperimentResult run_cutnorm(const SweepConfig& cfg, bool allow_long = false);

/// Measurements of a single replicate; used by the pool and for isolated
/// re-runs of one (grid point, seed).
Record run_single(const SweepConfig& cfg, std::size_t grid_index, int replicate);

/// Median and 5th/95th percentiles (linear interpolation between order
/// statistics) of the finite values.
Quantiles quantiles(std::vector<double> values);

std::vector<GridSummary> summarize(const SweepConfig& cfg,
                                   const std::vector<std::string>& metrics,
                                   const std::vector<Record>& records);

// Reports.

/// CSV with a header row, one line per record; floats with 17 significant
/// digits. Runtimes are left out so the file is reproducible byte for byte.
std::string to_csv(const ExperimentResult& result);

/// Rows parsed back from to_csv output.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable parse_csv(const std::string& text);

/// Recomputes summaries from a CSV produced by to_csv.
std::vector<GridSummary> summaries_from_csv(const std::string& text);

std::string to_json(const ExperimentResult& result);
std::string to_svg(const ExperimentResult& result);

/// Detection only: (a - b)^2 / (a + b) with median misclassification.
std::string phase_table(const ExperimentResult& result);

/// Writes <dir>/<experiment>.csv and .json (and .svg when asked). Throws on
/// empty results or unwritable paths. Returns the written paths.
std::vector<std::string> emit_report(const ExperimentResult& result,
                                     const std::string& dir, bool svg);

}  // namespace regspec
