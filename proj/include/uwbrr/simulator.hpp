#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uwbrr/cir_model.hpp"
#include "uwbrr/config.hpp"
#include "uwbrr/ingest.hpp"

namespace uwbrr {

enum class BreathingWaveform { sinusoid, clipped_sinusoid };

struct Reflection {
  int tap = 40;                 // window tap index when the direct path sits at its mean position
  double base_magnitude = 0.05;  // relative to the direct-path peak
  double modulation_depth = 0.3;
  double phase_rad = 0.0;
};

struct MotionEvent {
  double start_s = 0.0;
  double end_s = 0.0;
  double amplitude = 0.0;  // CIR magnitude units and g
};

/// Synthetic recording with known ground truth. Defaults reproduce the measured direct-path
/// statistics (mean index 741.7 in the full CIR, std 2.4 taps) for the default extraction offset.
struct SimScenario {
  std::string id = "sim";
  std::string activity = "synthetic";
  double duration_s = 120.0;
  double rr_bpm = 15.0;
  double rate_drift_bpm_per_min = 0.0;
  BreathingWaveform waveform = BreathingWaveform::sinusoid;
  double direct_path_tap_mean = 741.7 - 720.0;
  double direct_path_jitter_std = 2.4;
  double direct_path_magnitude = 1.0;
  std::vector<Reflection> reflections{Reflection{}};
  double noise_std = 0.0;
  std::vector<MotionEvent> motion_events;
  double cir_full_scale = 10000.0;  // integer counts per unit magnitude
  double tilt_amplitude_deg = 2.0;
  double accel_noise_std_g = 0.002;
  double reference_rate_hz = 50.0;
  ReferenceKind reference_kind = ReferenceKind::belt;
};

/// Breathing waveform value in [-1, 1] at phase `phase_rad`.
double breathing_value(BreathingWaveform waveform, double phase_rad);

/// Throws Error when the scenario cannot be rendered on the geometry.
void validate_scenario(const SimScenario& s, const SamplingGeometry& g);

/// Deterministic for fixed (scenario, geometry, seed). CIR taps are integer-valued so the
/// trace round-trips through the text format bit-exactly.
TraceRecord simulate(const SimScenario& s, const SamplingGeometry& g, std::uint64_t seed);

/// Reads `scenario.*` keys; any remaining keys are applied to the pipeline config.
struct ScenarioFile {
  SimScenario scenario;
  PipelineConfig config;
};
ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::filesystem::path& path);

}  // namespace uwbrr
