#include "uwbrr/cir_model.hpp"

#include <cmath>

namespace uwbrr {

std::optional<std::string> validate_band(const BandConfig& band, double slow_time_rate_hz) {
  if (!(band.f_low_hz > 0.0)) return "f_low > 0";
  if (!(band.f_low_hz < band.f_high_hz)) return "f_low < f_high";
  if (!(band.f_high_hz < slow_time_rate_hz / 2.0)) return "f_high < slow_time_rate/2";
  if (!(band.snr_band_width_bpm > 0.0)) return "snr_band_width > 0";
  return std::nullopt;
}

std::optional<std::string> validate_geometry(const SamplingGeometry& g,
                                             const CalibrationConfig& calibration,
                                             const BandConfig& band) {
  if (!(g.cir_tap_period_s > 0.0)) return "cir_tap_period > 0";
  if (calibration.half_window < 0) return "D >= 0";
  if (g.window_taps < calibration.span()) return "window_taps >= 2D+1";
  if (g.extraction_offset < 0) return "extraction_offset >= 0";
  if (g.extraction_offset + g.window_taps > kFullCirTaps) {
    return "extraction_offset + window_taps <= " + std::to_string(kFullCirTaps);
  }
  if (!(g.slow_time_rate_hz > 2.0 * band.f_high_hz)) return "slow_time_rate > 2*f_high (Nyquist)";
  if (!(g.speed_in_thorax_cm_per_ns > 0.0)) return "speed_in_thorax > 0";
  return std::nullopt;
}

void require_valid(const SamplingGeometry& g, const CalibrationConfig& calibration,
                   const BandConfig& band) {
  if (auto bad = validate_geometry(g, calibration, band)) {
    throw Error("invalid geometry: violated invariant '" + *bad + "'");
  }
  if (auto bad = validate_band(band, g.slow_time_rate_hz)) {
    throw Error("invalid band: violated invariant '" + *bad + "'");
  }
}

double tap_to_depth(double tap_index_from_skin, const SamplingGeometry& g) {
  if (tap_index_from_skin < 0.0) throw Error("tap_to_depth: negative tap index");
  return tap_index_from_skin * g.tap_period_ns() * g.speed_in_thorax_cm_per_ns;
}

}  // namespace uwbrr
