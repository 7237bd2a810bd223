#include "uwbrr/pipeline.hpp"

#include <cmath>

#include "uwbrr/baselines.hpp"
#include "uwbrr/spectral.hpp"

namespace uwbrr {

std::string to_string(Method m) {
  switch (m) {
    case Method::uwb: return "uwb";
    case Method::rahman: return "rahman";
    case Method::bates: return "bates";
  }
  return "uwb";
}

Method method_from_string(const std::string& s) {
  if (s == "uwb") return Method::uwb;
  if (s == "rahman") return Method::rahman;
  if (s == "bates") return Method::bates;
  throw Error("unknown method '" + s + "' (expected uwb|rahman|bates)");
}

UwbEstimate estimate_uwb(std::span<const CirFrame> frames, const PipelineConfig& config) {
  UwbEstimate out;
  out.stages = preprocess(frames, config);
  const FusionProblem problem = build_problem(out.stages.aligned, config.band,
                                              config.geometry.slow_time_rate_hz, config.fusion.remove_mean);
  out.fusion = solve(problem, config.fusion.regularization);
  out.rr = estimate_rr_from_signal(out.fusion.fused, config.geometry.slow_time_rate_hz, config.band,
                                   config.spectral.taper);
  return out;
}

std::size_t frames_for(double seconds, double rate_hz) {
  return static_cast<std::size_t>(std::llround(seconds * rate_hz));
}

std::vector<WindowSpan> sliding_windows(const TraceRecord& trace, std::size_t window_frames,
                                        std::size_t hop_frames, double rate_hz) {
  std::vector<WindowSpan> out;
  if (window_frames == 0 || hop_frames == 0) return out;
  const std::size_t total = trace.cir.size();
  for (std::size_t first = 0; first + window_frames <= total; first += hop_frames) {
    const double t0 = trace.cir[first].timestamp;
    out.push_back({first, window_frames, t0, t0 + static_cast<double>(window_frames) / rate_hz});
  }
  return out;
}

std::vector<WindowSpan> analysis_windows(const TraceRecord& trace, const PipelineConfig& config) {
  const double rate = config.geometry.slow_time_rate_hz;
  const std::size_t frames = std::min(frames_for(config.analysis.window_s, rate), trace.cir.size());
  const std::size_t hop =
      std::max<std::size_t>(1, frames_for(config.analysis.hop_fraction * config.analysis.window_s, rate));
  return sliding_windows(trace, frames, hop, rate);
}

std::optional<RrEstimate> estimate_window(const TraceRecord& trace, const WindowSpan& window,
                                          Method method, const PipelineConfig& config) {
  const double rate = config.geometry.slow_time_rate_hz;
  switch (method) {
    case Method::uwb: {
      const std::span<const CirFrame> frames(trace.cir.data() + window.first, window.count);
      return estimate_uwb(frames, config).rr;
    }
    case Method::rahman: {
      const AccelWindow win = make_accel_window(trace.accel, rate, window.t0, window.t1);
      return rr_rahman(win, config.band, config.baseline.min_window_s);
    }
    case Method::bates: {
      const AccelWindow win = make_accel_window(trace.accel, rate, window.t0, window.t1);
      return rr_bates(win, config.band, config.baseline.motion_threshold_g, config.baseline.min_window_s);
    }
  }
  throw Error("unknown method");
}

std::optional<double> reference_rate(const TraceRecord& trace, const WindowSpan& window,
                                     const PipelineConfig& config) {
  if (trace.truth) return trace.truth->mean_rate(window.t0, window.t1);
  if (trace.reference_kind == ReferenceKind::none || trace.reference.size() < 2) return std::nullopt;
  const auto uniform = resample_reference(trace.reference, config.geometry.slow_time_rate_hz);
  std::vector<double> values;
  for (const TimedValue& v : uniform) {
    if (v.t >= window.t0 && v.t < window.t1) values.push_back(v.value);
  }
  if (values.size() < 4) return std::nullopt;
  try {
    return estimate_rr_from_signal(values, config.geometry.slow_time_rate_hz, config.band).rate_bpm;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace uwbrr
