#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uwbrr/cir_model.hpp"

namespace uwbrr {

struct AccelSample {
  double t = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;
};

struct TimedValue {
  double t = 0.0;
  double value = 0.0;
};

enum class ReferenceKind { spirometer, belt, none };

std::string to_string(ReferenceKind kind);
ReferenceKind reference_kind_from_string(const std::string& s);

/// Known ground truth for synthetic traces: rate(t) = rr_bpm + drift_bpm_per_min * t / 60.
struct GroundTruth {
  double rr_bpm = 0.0;
  double drift_bpm_per_min = 0.0;

  /// Mean instantaneous rate over [t0, t1].
  double mean_rate(double t0, double t1) const {
    return rr_bpm + drift_bpm_per_min * 0.5 * (t0 + t1) / 60.0;
  }
};

struct TraceRecord {
  std::string id;
  std::vector<CirFrame> cir;
  std::vector<AccelSample> accel;
  std::vector<TimedValue> reference;
  ReferenceKind reference_kind = ReferenceKind::none;
  std::string activity_label;
  double duration = 0.0;
  std::optional<GroundTruth> truth;
};

struct Gap {
  double start = 0.0;
  double end = 0.0;
};

struct IngestReport {
  std::size_t frames_read = 0;
  std::size_t duplicates_dropped = 0;
  std::vector<Gap> gaps;
  double clock_skew_estimate = 0.0;
};

struct ParsedTrace {
  TraceRecord trace;
  IngestReport report;
};

/// Parses trace format v1 from text. `jitter_tolerance` is the accepted relative deviation of
/// a single-step frame interval from 1/slow_time_rate.
ParsedTrace parse_trace_text(const std::string& text, const SamplingGeometry& g,
                             double jitter_tolerance = 0.20);
ParsedTrace parse_trace(const std::filesystem::path& path, const SamplingGeometry& g,
                        double jitter_tolerance = 0.20);

/// Serializes in trace format v1. CIR tap components are written as integers, so values are
/// rounded; simulator output is already integral and round-trips exactly.
std::string write_trace_text(const TraceRecord& trace);
void write_trace(const TraceRecord& trace, const std::filesystem::path& path);

/// Linear interpolation onto t0, t0 + 1/rate, ... up to the last reference time.
std::vector<TimedValue> resample_reference(const std::vector<TimedValue>& reference, double target_rate);

}  // namespace uwbrr
