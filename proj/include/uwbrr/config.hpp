#pragma once

#include <filesystem>
#include <vector>
#include <string>

#include "uwbrr/cir_model.hpp"

namespace uwbrr {

enum class Taper { none, hann };

struct AlignmentConfig {
  bool enabled = true;
  int search_radius = 8;
};

struct FusionConfig {
  bool remove_mean = true;
  double regularization = 1e-9;
};

struct SpectralConfig {
  Taper taper = Taper::none;
  // Display-only zero padding factor; estimators always run unpadded.
  int zero_pad = 1;
};

struct AnalysisConfig {
  double window_s = 120.0;
  // Hop as a fraction of the window length.
  double hop_fraction = 0.10;
  double jitter_tolerance = 0.20;
};

struct BaselineConfig {
  double motion_threshold_g = 0.05;
  double min_window_s = 30.0;
};

/// Every tunable of the pipeline. Defaults are the published system's values where
/// it states them; the rest are documented choices (see README).
struct PipelineConfig {
  SamplingGeometry geometry;
  BandConfig band;
  CalibrationConfig calibration;
  AlignmentConfig alignment;
  FusionConfig fusion;
  SpectralConfig spectral;
  AnalysisConfig analysis;
  BaselineConfig baseline;
  // When true, frames are calibrated in the complex domain before taking magnitudes.
  bool calibrate_before_magnitude = false;
};

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Flat "key = value" lines in file order; '#' starts a comment. Keys may repeat.
using KeyValues = std::vector<KeyValue>;

KeyValues parse_key_values(const std::string& text);

/// Applies keys onto `base`, throwing Error on unparsable values. Unknown keys are an
/// error unless `unused` is given, in which case they are collected there.
PipelineConfig apply_config(const KeyValues& kv, PipelineConfig base = {},
                            KeyValues* unused = nullptr);
PipelineConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_key_values(to_text(c)) reproduces c.
std::string to_text(const PipelineConfig& config);

double parse_double(const std::string& key, const std::string& value);
long long parse_int(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);

}  // namespace uwbrr
