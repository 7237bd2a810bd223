#include "uwbrr/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace uwbrr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kClipLevel = 0.7;
constexpr double kPulseShape[3] = {0.5, 1.0, 0.5};

// Breathing phase at time t with a linearly drifting rate.
double breathing_phase(const SimScenario& s, double t) {
  const double f0 = s.rr_bpm / 60.0;
  const double df_dt = s.rate_drift_bpm_per_min / 3600.0;
  return kTwoPi * (f0 * t + 0.5 * df_dt * t * t);
}

double motion_amplitude(const SimScenario& s, double t) {
  double amp = 0.0;
  for (const MotionEvent& e : s.motion_events) {
    if (t >= e.start_s && t < e.end_s) amp = std::max(amp, e.amplitude);
  }
  return amp;
}

std::vector<double> split_numbers(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw Error(key + ": empty list element");
    out.push_back(parse_double(key, item.substr(first, last - first + 1)));
  }
  return out;
}

}  // namespace

double breathing_value(BreathingWaveform waveform, double phase_rad) {
  const double v = std::sin(phase_rad);
  if (waveform == BreathingWaveform::clipped_sinusoid) return std::clamp(v, -kClipLevel, kClipLevel) / kClipLevel;
  return v;
}

void validate_scenario(const SimScenario& s, const SamplingGeometry& g) {
  if (!(s.duration_s > 0.0)) throw Error("scenario: duration must be > 0");
  if (!(s.rr_bpm > 0.0)) throw Error("scenario: rr must be > 0");
  if (s.direct_path_jitter_std < 0.0 || s.noise_std < 0.0) throw Error("scenario: negative std");
  const long center = std::lround(s.direct_path_tap_mean);
  if (center < 1 || center > g.window_taps - 2) throw Error("scenario: direct path outside window");
  for (const Reflection& r : s.reflections) {
    if (r.tap < 0 || r.tap >= g.window_taps) throw Error("scenario: reflection tap outside window");
    if (std::labs(r.tap - center) <= 1) {
      throw Error("scenario: reflection tap " + std::to_string(r.tap) + " collides with direct path");
    }
    if (r.modulation_depth < 0.0 || r.modulation_depth > 1.0) throw Error("scenario: modulation depth outside [0, 1]");
    if (r.base_magnitude < 0.0) throw Error("scenario: negative reflection magnitude");
  }
  if (!(s.cir_full_scale > 0.0)) throw Error("scenario: cir_full_scale must be > 0");
  if (!(s.reference_rate_hz > 0.0)) throw Error("scenario: reference rate must be > 0");
}

TraceRecord simulate(const SimScenario& s, const SamplingGeometry& g, std::uint64_t seed) {
  validate_scenario(s, g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform_phase(0.0, kTwoPi);

  const auto taps = static_cast<std::size_t>(g.window_taps);
  const long nominal = std::lround(s.direct_path_tap_mean);
  const double rate = g.slow_time_rate_hz;
  const auto frames = static_cast<std::size_t>(std::llround(s.duration_s * rate));

  // Carrier phases are fixed per trace: one for the direct path, one per reflection.
  const double direct_phase = uniform_phase(rng);
  std::vector<double> reflection_phase(s.reflections.size());
  for (double& p : reflection_phase) p = uniform_phase(rng);

  TraceRecord trace;
  trace.id = s.id;
  trace.activity_label = s.activity;
  trace.reference_kind = s.reference_kind;
  trace.duration = static_cast<double>(frames) / rate;
  trace.truth = GroundTruth{s.rr_bpm, s.rate_drift_bpm_per_min};
  trace.cir.reserve(frames);
  trace.accel.reserve(frames);

  const double noise_scale = s.noise_std / std::numbers::sqrt2;
  const double tilt_rad = s.tilt_amplitude_deg * std::numbers::pi / 180.0;
  std::vector<Complex> clean(taps);
  for (std::size_t n = 0; n < frames; ++n) {
    const double t = static_cast<double>(n) / rate;
    const double phase = breathing_phase(s, t);
    const double motion = motion_amplitude(s, t);

    long center = std::lround(s.direct_path_tap_mean + s.direct_path_jitter_std * normal(rng));
    center = std::clamp(center, 1L, static_cast<long>(taps) - 2);
    const long shift = center - nominal;

    std::fill(clean.begin(), clean.end(), Complex(0.0, 0.0));
    for (int d = -1; d <= 1; ++d) {
      clean[static_cast<std::size_t>(center + d)] += std::polar(s.direct_path_magnitude * kPulseShape[d + 1], direct_phase);
    }
    for (std::size_t r = 0; r < s.reflections.size(); ++r) {
      const Reflection& refl = s.reflections[r];
      double mag = refl.base_magnitude *
                   (1.0 + refl.modulation_depth * breathing_value(s.waveform, phase + refl.phase_rad));
      if (motion > 0.0) mag = std::max(0.0, mag + motion * normal(rng));
      const long pos = refl.tap + shift;
      if (pos >= 0 && pos < static_cast<long>(taps)) clean[static_cast<std::size_t>(pos)] += std::polar(mag, reflection_phase[r]);
    }

    CirFrame frame;
    frame.counter = n;
    frame.timestamp = t;
    frame.taps.resize(taps);
    for (std::size_t m = 0; m < taps; ++m) {
      Complex v = clean[m];
      if (noise_scale > 0.0) {
        const double re = normal(rng);
        const double im = normal(rng);
        v += Complex(re, im) * noise_scale;
      }
      frame.taps[m] = Complex(std::round(v.real() * s.cir_full_scale), std::round(v.imag() * s.cir_full_scale));
    }
    trace.cir.push_back(std::move(frame));

    const double tilt = tilt_rad * breathing_value(s.waveform, phase);
    AccelSample a{t, 0.0, std::sin(tilt), std::cos(tilt)};
    const double accel_noise = s.accel_noise_std_g;
    a.ax += accel_noise * normal(rng) + motion * normal(rng);
    a.ay += accel_noise * normal(rng) + motion * normal(rng);
    a.az += accel_noise * normal(rng) + motion * normal(rng);
    trace.accel.push_back(a);
  }

  const auto ref_count = static_cast<std::size_t>(std::llround(s.duration_s * s.reference_rate_hz));
  trace.reference.reserve(ref_count);
  for (std::size_t k = 0; k < ref_count; ++k) {
    const double t = static_cast<double>(k) / s.reference_rate_hz;
    trace.reference.push_back({t, breathing_value(s.waveform, breathing_phase(s, t))});
  }
  return trace;
}

ScenarioFile parse_scenario(const std::string& text) {
  ScenarioFile out;
  KeyValues rest;
  KeyValues scenario_keys;
  for (const KeyValue& kv : parse_key_values(text)) {
    (kv.key.starts_with("scenario.") ? scenario_keys : rest).push_back(kv);
  }
  out.config = apply_config(rest);

  SimScenario& s = out.scenario;
  bool reflections_given = false;
  for (const KeyValue& kv : scenario_keys) {
    const std::string key = kv.key.substr(std::string("scenario.").size());
    const std::string& v = kv.value;
    if (key == "id") s.id = v;
    else if (key == "activity") s.activity = v;
    else if (key == "duration_s") s.duration_s = parse_double(kv.key, v);
    else if (key == "rr_bpm") s.rr_bpm = parse_double(kv.key, v);
    else if (key == "rate_drift_bpm_per_min") s.rate_drift_bpm_per_min = parse_double(kv.key, v);
    else if (key == "waveform") {
      if (v == "sinusoid") s.waveform = BreathingWaveform::sinusoid;
      else if (v == "clipped-sinusoid") s.waveform = BreathingWaveform::clipped_sinusoid;
      else throw Error(kv.key + ": expected sinusoid|clipped-sinusoid");
    }
    else if (key == "direct_path_tap_mean") s.direct_path_tap_mean = parse_double(kv.key, v);
    else if (key == "direct_path_jitter_std") s.direct_path_jitter_std = parse_double(kv.key, v);
    else if (key == "direct_path_magnitude") s.direct_path_magnitude = parse_double(kv.key, v);
    else if (key == "noise_std") s.noise_std = parse_double(kv.key, v);
    else if (key == "cir_full_scale") s.cir_full_scale = parse_double(kv.key, v);
    else if (key == "tilt_amplitude_deg") s.tilt_amplitude_deg = parse_double(kv.key, v);
    else if (key == "accel_noise_std_g") s.accel_noise_std_g = parse_double(kv.key, v);
    else if (key == "reference_rate_hz") s.reference_rate_hz = parse_double(kv.key, v);
    else if (key == "reference_kind") s.reference_kind = reference_kind_from_string(v);
    else if (key == "reflection") {
      const auto f = split_numbers(kv.key, v);
      if (f.size() != 4) throw Error(kv.key + ": expected tap, base, depth, phase");
      if (!reflections_given) s.reflections.clear();
      reflections_given = true;
      s.reflections.push_back({static_cast<int>(f[0]), f[1], f[2], f[3]});
    } else if (key == "motion") {
      const auto f = split_numbers(kv.key, v);
      if (f.size() != 3) throw Error(kv.key + ": expected start, end, amplitude");
      s.motion_events.push_back({f[0], f[1], f[2]});
    } else {
      throw Error("scenario line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
    }
  }
  validate_scenario(s, out.config.geometry);
  return out;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace uwbrr
