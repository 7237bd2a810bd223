#pragma once

#include <span>
#include <string>
#include <vector>

#include "uwbrr/config.hpp"
#include "uwbrr/ingest.hpp"
#include "uwbrr/pipeline.hpp"

namespace uwbrr {

/// A window counts as a success when its absolute error is strictly below this many bpm.
inline constexpr double kSuccessThresholdBpm = 1.0;

struct EvalRow {
  std::string id;
  std::string activity;
  std::string method;
  double rr_est = 0.0;
  double rr_ref = 0.0;
  double abs_err = 0.0;
  double snr = 0.0;
  bool suppressed = false;  // bates motion gate; excluded from aggregates
};

struct ActivityAggregate {
  std::string activity;  // "all" for the pooled aggregate
  std::size_t n = 0;
  double rmse = 0.0;
  double mape = 0.0;  // percent
  double success_rate = 0.0;
  double mean_snr = 0.0;  // over rows with finite snr
};

struct EvalResult {
  std::vector<EvalRow> rows;
  std::vector<ActivityAggregate> aggregates;
  std::size_t excluded_no_reference = 0;
  std::size_t failed = 0;
};

double rmse(std::span<const double> errors);
double mape(std::span<const double> estimates, std::span<const double> references);
double success_rate(std::span<const double> abs_errors);

/// Per-activity aggregates (sorted by activity) followed by the pooled "all" aggregate.
std::vector<ActivityAggregate> aggregate(std::span<const EvalRow> rows);

/// One row per trace, estimated over the trace's first analysis window (or the whole trace
/// when it is shorter than the configured window).
EvalResult evaluate(std::span<const TraceRecord> traces, Method method, const PipelineConfig& config);

/// Row-wise concatenation with aggregates recomputed from the merged rows.
EvalResult merge(const EvalResult& a, const EvalResult& b);

struct ProportionInterval {
  double low = 0.0;
  double high = 0.0;
};

/// 95% normal-approximation interval, Wilson score below 10 trials; clamped to [0, 1].
ProportionInterval proportion_ci(std::size_t successes, std::size_t trials);

struct WindowSweepRow {
  double window_s = 0.0;
  double success_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_windows = 0;
  double mean_abs_err = 0.0;
};

struct WindowSweepResult {
  std::vector<WindowSweepRow> rows;
};

/// 2, 5, ..., 119 seconds.
std::vector<double> default_sweep_grid();

/// Slides every window size over the trace with hop = step_fraction * size. Windows whose
/// estimate fails count as unsuccessful; suppressed windows are skipped.
WindowSweepResult window_sweep(const TraceRecord& trace, std::span<const double> grid_s,
                               double step_fraction, Method method, const PipelineConfig& config);

/// Pearson correlation of (snr, abs_err) over unsuppressed rows with finite snr.
double snr_error_correlation(const EvalResult& result);

double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace uwbrr
