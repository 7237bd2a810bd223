#include "uwbrr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace uwbrr {

double rmse(std::span<const double> errors) {
  if (errors.empty()) return 0.0;
  double sum = 0.0;
  for (const double e : errors) sum += e * e;
  return std::sqrt(sum / static_cast<double>(errors.size()));
}

double mape(std::span<const double> estimates, std::span<const double> references) {
  if (estimates.size() != references.size()) throw Error("mape: length mismatch");
  if (estimates.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (references[i] == 0.0) throw Error("mape: zero reference rate");
    sum += std::abs(estimates[i] - references[i]) / std::abs(references[i]);
  }
  return 100.0 * sum / static_cast<double>(estimates.size());
}

double success_rate(std::span<const double> abs_errors) {
  if (abs_errors.empty()) return 0.0;
  const auto hits = std::count_if(abs_errors.begin(), abs_errors.end(),
                                  [](double e) { return e < kSuccessThresholdBpm; });
  return static_cast<double>(hits) / static_cast<double>(abs_errors.size());
}

namespace {

ActivityAggregate summarize(const std::string& activity, const std::vector<const EvalRow*>& rows) {
  ActivityAggregate agg;
  agg.activity = activity;
  std::vector<double> err, abs_err, est, ref;
  double snr_sum = 0.0;
  std::size_t snr_n = 0;
  for (const EvalRow* r : rows) {
    err.push_back(r->rr_est - r->rr_ref);
    abs_err.push_back(r->abs_err);
    est.push_back(r->rr_est);
    ref.push_back(r->rr_ref);
    if (std::isfinite(r->snr)) {
      snr_sum += r->snr;
      ++snr_n;
    }
  }
  agg.n = rows.size();
  agg.rmse = rmse(err);
  agg.mape = mape(est, ref);
  agg.success_rate = success_rate(abs_err);
  agg.mean_snr = snr_n > 0 ? snr_sum / static_cast<double>(snr_n) : 0.0;
  return agg;
}

}  // namespace

std::vector<ActivityAggregate> aggregate(std::span<const EvalRow> rows) {
  std::map<std::string, std::vector<const EvalRow*>> by_activity;
  std::vector<const EvalRow*> all;
  for (const EvalRow& r : rows) {
    if (r.suppressed) continue;
    by_activity[r.activity].push_back(&r);
    all.push_back(&r);
  }
  std::vector<ActivityAggregate> out;
  for (const auto& [activity, group] : by_activity) out.push_back(summarize(activity, group));
  out.push_back(summarize("all", all));
  return out;
}

EvalResult evaluate(std::span<const TraceRecord> traces, Method method, const PipelineConfig& config) {
  const double rate = config.geometry.slow_time_rate_hz;
  struct Outcome {
    std::optional<EvalRow> row;
    bool no_reference = false;
    bool failed = false;
  };
  std::vector<Outcome> outcomes(traces.size());
  const long count = static_cast<long>(traces.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const TraceRecord& trace = traces[static_cast<std::size_t>(i)];
    Outcome& outcome = outcomes[static_cast<std::size_t>(i)];
    try {
      const std::size_t frames = std::min(frames_for(config.analysis.window_s, rate), trace.cir.size());
      const auto windows = sliding_windows(trace, frames, frames, rate);
      if (windows.empty()) {
        outcome.failed = true;
        continue;
      }
      const WindowSpan& window = windows.front();
      const auto ref = reference_rate(trace, window, config);
      if (!ref) {
        outcome.no_reference = true;
        continue;
      }
      EvalRow row;
      row.id = trace.id;
      row.activity = trace.activity_label;
      row.method = to_string(method);
      row.rr_ref = *ref;
      const auto est = estimate_window(trace, window, method, config);
      if (!est) {
        row.suppressed = true;
      } else {
        row.rr_est = est->rate_bpm;
        row.abs_err = std::abs(est->rate_bpm - *ref);
        row.snr = est->snr;
      }
      outcome.row = row;
    } catch (const Error&) {
      outcome.failed = true;
    }
  }

  EvalResult result;
  for (const Outcome& o : outcomes) {
    if (o.row) result.rows.push_back(*o.row);
    if (o.no_reference) ++result.excluded_no_reference;
    if (o.failed) ++result.failed;
  }
  result.aggregates = aggregate(result.rows);
  return result;
}

EvalResult merge(const EvalResult& a, const EvalResult& b) {
  EvalResult out;
  out.rows = a.rows;
  out.rows.insert(out.rows.end(), b.rows.begin(), b.rows.end());
  out.excluded_no_reference = a.excluded_no_reference + b.excluded_no_reference;
  out.failed = a.failed + b.failed;
  out.aggregates = aggregate(out.rows);
  return out;
}

ProportionInterval proportion_ci(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  if (trials < 10) {
    const double denom = 1.0 + z * z / n;
    const double center = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    return {std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
  }
  const double half = z * std::sqrt(p * (1.0 - p) / n);
  return {std::clamp(p - half, 0.0, 1.0), std::clamp(p + half, 0.0, 1.0)};
}

std::vector<double> default_sweep_grid() {
  std::vector<double> grid;
  for (int s = 2; s <= 119; s += 3) grid.push_back(static_cast<double>(s));
  return grid;
}

WindowSweepResult window_sweep(const TraceRecord& trace, std::span<const double> grid_s,
                               double step_fraction, Method method, const PipelineConfig& config) {
  const double rate = config.geometry.slow_time_rate_hz;
  WindowSweepResult result;
  for (const double size : grid_s) {
    const std::size_t frames = frames_for(size, rate);
    const std::size_t hop = std::max<std::size_t>(1, frames_for(step_fraction * size, rate));
    const auto windows = sliding_windows(trace, frames, hop, rate);

    // 1 = success, 0 = miss, 2 = estimator error (a miss without an error value),
    // -1 = skipped (suppressed or no reference).
    std::vector<int> outcome(windows.size(), -1);
    std::vector<double> abs_err(windows.size(), 0.0);
    const long count = static_cast<long>(windows.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      std::optional<double> ref;
      try {
        ref = reference_rate(trace, windows[idx], config);
      } catch (const Error&) {
      }
      if (!ref) continue;
      try {
        const auto est = estimate_window(trace, windows[idx], method, config);
        if (!est) continue;
        abs_err[idx] = std::abs(est->rate_bpm - *ref);
        outcome[idx] = abs_err[idx] < kSuccessThresholdBpm ? 1 : 0;
      } catch (const Error&) {
        outcome[idx] = 2;
      }
    }

    WindowSweepRow row;
    row.window_s = size;
    std::size_t successes = 0;
    double err_sum = 0.0;
    std::size_t err_n = 0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (outcome[i] < 0) continue;
      ++row.n_windows;
      if (outcome[i] == 1) ++successes;
      if (outcome[i] <= 1) {
        err_sum += abs_err[i];
        ++err_n;
      }
    }
    if (row.n_windows > 0) row.success_rate = static_cast<double>(successes) / static_cast<double>(row.n_windows);
    if (err_n > 0) row.mean_abs_err = err_sum / static_cast<double>(err_n);
    const auto ci = proportion_ci(successes, row.n_windows);
    row.ci_low = ci.low;
    row.ci_high = ci.high;
    result.rows.push_back(row);
  }
  return result;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson: length mismatch");
  if (x.size() < 3) throw Error("correlation needs at least 3 rows");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("correlation undefined: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

double snr_error_correlation(const EvalResult& result) {
  std::vector<double> snr, err;
  for (const EvalRow& r : result.rows) {
    if (r.suppressed || !std::isfinite(r.snr)) continue;
    snr.push_back(r.snr);
    err.push_back(r.abs_err);
  }
  return pearson(snr, err);
}

}  // namespace uwbrr
