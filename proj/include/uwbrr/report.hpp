#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uwbrr/cir_model.hpp"
#include "uwbrr/eval.hpp"
#include "uwbrr/ingest.hpp"
#include "uwbrr/pipeline.hpp"

namespace uwbrr {

/// One row of `uwbrr process` output.
struct WindowReport {
  std::size_t index = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  std::string method;
  std::optional<double> rr_bpm;  // nullopt when suppressed or failed
  double snr = 0.0;
  double peak_hz = 0.0;
  std::optional<double> rayleigh;  // uwb only
  std::optional<double> ref_bpm;
  std::string status = "ok";  // ok | suppressed | error: <message>
};

/// Runs `method` over every analysis window of the trace. Estimator errors are reported in
/// `status` rather than thrown. Output is independent of the OpenMP thread count.
std::vector<WindowReport> process_trace(const TraceRecord& trace, Method method, const PipelineConfig& config);

std::string format_number(double v);

std::string windows_csv(std::span<const WindowReport> rows);
std::string windows_json(std::span<const WindowReport> rows, const IngestReport& ingest);

std::string eval_rows_csv(const EvalResult& result);
std::string eval_aggregates_csv(const EvalResult& result);
std::string eval_json(const EvalResult& result);

/// Reads rows written by eval_rows_csv; aggregates are recomputed.
EvalResult parse_eval_rows_csv(const std::string& text);

std::string sweep_csv(const WindowSweepResult& sweep);
std::string sweep_json(const WindowSweepResult& sweep);

std::string spectrum_csv(const Spectrum& spectrum);
std::string matrix_csv(const CirMatrix& h);
/// Weights annotated with tap index and one-way thorax depth from the first tap.
std::string weights_csv(std::span<const double> weights, const SamplingGeometry& g);

}  // namespace uwbrr
