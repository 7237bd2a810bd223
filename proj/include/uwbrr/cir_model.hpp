#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uwbrr {

/// Error raised for malformed input or violated preconditions anywhere in the pipeline.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of complex taps the DW3000 accumulator delivers at 64 MHz PRF.
inline constexpr int kFullCirTaps = 1016;

using Complex = std::complex<double>;

// Sampling layout of one extracted CIR window and the slow-time frame rate.
struct SamplingGeometry {
  double cir_tap_period_s = 1.0 / (2.0 * 499.2e6);
  int extraction_offset = 720;
  int window_taps = 100;
  double slow_time_rate_hz = 32.0;
  double refractive_index_thorax = 7.0710678118654752;  // sqrt(50)
  double speed_in_thorax_cm_per_ns = 4.2;
  double speed_in_air_cm_per_ns = 29.9;

  double tap_period_ns() const { return cir_tap_period_s * 1e9; }
};

/// Half-width D of the direct-path energy window; the window spans 2D+1 taps.
struct CalibrationConfig {
  int half_window = 3;
  int span() const { return 2 * half_window + 1; }
};

/// Respiration band and SNR band width.
struct BandConfig {
  double f_low_hz = 0.1;
  double f_high_hz = 0.7;
  double snr_band_width_bpm = 6.0;

  double min_bpm() const { return 60.0 * f_low_hz; }
  double max_bpm() const { return 60.0 * f_high_hz; }
};

struct CirFrame {
  std::uint64_t counter = 0;
  double timestamp = 0.0;
  std::vector<Complex> taps;

  friend bool operator==(const CirFrame&, const CirFrame&) = default;
};

/// Slow-time x fast-time real matrix, row-major. Rows are frames, columns are taps.
class CirMatrix {
 public:
  CirMatrix() = default;
  CirMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0), row_times_(rows, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::vector<double>& row_times() { return row_times_; }
  const std::vector<double>& row_times() const { return row_times_; }

  friend bool operator==(const CirMatrix&, const CirMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<double> row_times_;
};

/// One-sided power spectrum over DFT bins 0..N/2.
struct Spectrum {
  std::vector<double> frequencies;
  std::vector<double> power;
};

struct RrEstimate {
  double rate_bpm = 0.0;
  double peak_frequency = 0.0;
  /// +infinity when every non-DC bin lies inside the signal band.
  double snr = 0.0;
  Spectrum spectrum;

  bool snr_is_infinite() const { return snr == std::numeric_limits<double>::infinity(); }
};

/// Returns the name of the first violated invariant, or nullopt when the geometry is usable.
std::optional<std::string> validate_geometry(const SamplingGeometry& g,
                                             const CalibrationConfig& calibration = {},
                                             const BandConfig& band = {});

/// Throws Error when validate_geometry reports a violation.
void require_valid(const SamplingGeometry& g, const CalibrationConfig& calibration = {},
                   const BandConfig& band = {});

std::optional<std::string> validate_band(const BandConfig& band, double slow_time_rate_hz);

/// One-way path length in cm for a tap distance measured from the skin, assuming thorax
/// propagation speed. A round-trip depth is half of this value.
double tap_to_depth(double tap_index_from_skin, const SamplingGeometry& g);

}  // namespace uwbrr
