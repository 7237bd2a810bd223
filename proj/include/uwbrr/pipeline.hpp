#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uwbrr/config.hpp"
#include "uwbrr/fusion.hpp"
#include "uwbrr/ingest.hpp"
#include "uwbrr/preprocess.hpp"

namespace uwbrr {

enum class Method { uwb, rahman, bates };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct UwbEstimate {
  RrEstimate rr;
  FusionSolution fusion;
  PreprocessResult stages;
};

/// Full radar pipeline on one analysis window of frames.
UwbEstimate estimate_uwb(std::span<const CirFrame> frames, const PipelineConfig& config);

/// Frame range [first, first + count) of one analysis window.
struct WindowSpan {
  std::size_t first = 0;
  std::size_t count = 0;
  double t0 = 0.0;
  double t1 = 0.0;
};

/// Windows of `window_frames` frames advanced by `hop_frames`; only complete windows.
std::vector<WindowSpan> sliding_windows(const TraceRecord& trace, std::size_t window_frames,
                                        std::size_t hop_frames, double rate_hz);

std::size_t frames_for(double seconds, double rate_hz);

/// Windows of analysis.window_s (clipped to the trace length) advanced by hop_fraction of it.
std::vector<WindowSpan> analysis_windows(const TraceRecord& trace, const PipelineConfig& config);

/// Runs `method` on one window. nullopt means the bates motion gate suppressed the window.
std::optional<RrEstimate> estimate_window(const TraceRecord& trace, const WindowSpan& window,
                                          Method method, const PipelineConfig& config);

/// Ground-truth metadata when present, otherwise the spectral peak of the reference stream
/// (resampled to the slow-time rate) over the same window. nullopt when neither is usable.
std::optional<double> reference_rate(const TraceRecord& trace, const WindowSpan& window,
                                     const PipelineConfig& config);

}  // namespace uwbrr
