#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparsecqp/model.hpp"
#include "sparsecqp/solvers.hpp"

namespace sparsecqp {

struct Metrics {
  double relErr = 0.0;  ///< ||xHat - xTrue||^2 / ||xTrue||^2
  double fpRate = 0.0;  ///< false positives over n - k
  double fnRate = 0.0;  ///< false negatives over k
  double runTime = 0.0;  ///< seconds
};

/// Recovery metrics. An entry counts as nonzero when it exceeds `zeroThreshold`.
Metrics compute_metrics(const Vector& xHat, const Vector& xTrue, int k, double runTime,
                        double zeroThreshold = support_threshold(1.0));

enum class Method { L1, CQP };
enum class BoundMode { HalfStep, FullStep };

std::string_view to_string(Method method);
std::string_view to_string(BoundMode mode);
/// Case-insensitive; std::nullopt for unknown names.
std::optional<Method> parse_method(std::string_view name);
std::optional<BoundMode> parse_bound_mode(std::string_view name);

struct ExperimentConfig {
  int n = 10;
  int m = 4;
  int k = 2;
  MagnitudePrior prior{1.0, 1.0};
  std::vector<std::int64_t> levels;
  int runs = 20;
  std::uint64_t seed = 0;
  std::vector<Method> methods{Method::L1, Method::CQP};
  BoundMode boundMode = BoundMode::HalfStep;
  BnbConfig bnb;
  /// Worker threads over runs; the log order does not depend on it.
  int jobs = 1;

  /// Throws InvalidArgument / InvalidDimension on an unusable configuration.
  void validate() const;
};

/// One (run, levels, method) cell of the per-run log.
struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  std::int64_t levels = 0;
  Method method = Method::L1;
  bool ok = false;  ///< false when the solver failed; metrics are then meaningless
  SolveStatus status = SolveStatus::Infeasible;
  Metrics metrics;
  std::string error;
};

struct CellSummary {
  Method method = Method::L1;
  std::int64_t levels = 0;
  int count = 0;  ///< successful runs contributing to the statistics
  double relErrMean = 0.0;
  double relErrStd = 0.0;
  double fpMean = 0.0;
  double fpStd = 0.0;
  double fnMean = 0.0;
  double fnStd = 0.0;
  double timeMean = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  ///< ordered by (run, levels, method)
  std::vector<CellSummary> table;  ///< ordered by (method, levels) as configured
};

/// All cells of one run: instance from `seed`, quantized at every level, every method.
std::vector<RunRecord> run_one(const ExperimentConfig& cfg, int run, std::uint64_t seed);

/// Means and sample standard deviations per (method, levels) over successful records.
std::vector<CellSummary> summarize(const ExperimentConfig& cfg, const std::vector<RunRecord>& records);

/// Full sweep; run r uses seed cfg.seed + r.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

inline constexpr std::string_view kSummaryCsvHeader =
    "method,levels,rel_err_mean,rel_err_std,fp_mean,fp_std,fn_mean,fn_std,time_mean_s";
inline constexpr std::string_view kRunsCsvHeader = "run,seed,method,levels,rel_err,fp,fn,time_s";

void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& table);
void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records);

/// "%.17g" formatting shared by the CSV and JSON writers.
std::string format_double(double v);

}  // namespace sparsecqp
