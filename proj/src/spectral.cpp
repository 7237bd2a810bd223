#include "uwbrr/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "uwbrr/fft.hpp"

namespace uwbrr {

namespace {
constexpr double kFreqSlack = 1e-9;
}

Spectrum periodogram(std::span<const double> signal, double rate_hz, Taper taper, int zero_pad) {
  const std::size_t n = signal.size();
  if (n < 4) throw Error("periodogram: need at least 4 samples");
  if (zero_pad < 1) throw Error("periodogram: zero_pad must be >= 1");
  double mean = 0.0;
  for (const double v : signal) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> x(n * static_cast<std::size_t>(zero_pad), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = signal[i] - mean;
    if (taper == Taper::hann) {
      v *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    x[i] = v;
  }
  const auto bins = fft::real_dft(x);
  Spectrum s;
  s.frequencies.resize(bins.size());
  s.power.resize(bins.size());
  const double total = static_cast<double>(x.size());
  for (std::size_t j = 0; j < bins.size(); ++j) {
    s.frequencies[j] = static_cast<double>(j) * rate_hz / total;
    s.power[j] = std::norm(bins[j]);
  }
  return s;
}

// Residual power below this fraction of the total is FFT round-off, not noise.
constexpr double kRoundoffFraction = 1e-20;

double snr(const Spectrum& spectrum, double peak_hz, double band_width_bpm) {
  if (spectrum.frequencies.empty()) throw Error("snr: empty spectrum");
  if (peak_hz < spectrum.frequencies.front() || peak_hz > spectrum.frequencies.back() + kFreqSlack) {
    throw Error("snr: peak outside spectrum range");
  }
  const double half_width_hz = 0.5 * band_width_bpm / 60.0;
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t j = 0; j < spectrum.power.size(); ++j) {
    const double f = spectrum.frequencies[j];
    if (std::abs(f - peak_hz) <= half_width_hz + kFreqSlack) {
      signal += spectrum.power[j];
    } else if (j != 0) {
      noise += spectrum.power[j];
    }
  }
  if (noise <= kRoundoffFraction * (signal + noise)) return std::numeric_limits<double>::infinity();
  return signal / noise;
}

RrEstimate estimate_rr(const Spectrum& spectrum, const BandConfig& band) {
  std::size_t best = spectrum.power.size();
  for (std::size_t j = 0; j < spectrum.power.size(); ++j) {
    const double f = spectrum.frequencies[j];
    if (f < band.f_low_hz - kFreqSlack || f > band.f_high_hz + kFreqSlack) continue;
    if (best == spectrum.power.size() || spectrum.power[j] > spectrum.power[best]) best = j;
  }
  if (best == spectrum.power.size()) throw Error("estimate_rr: no spectral bins inside the band");
  RrEstimate est;
  est.peak_frequency = spectrum.frequencies[best];
  est.rate_bpm = 60.0 * est.peak_frequency;
  est.snr = snr(spectrum, est.peak_frequency, band.snr_band_width_bpm);
  est.spectrum = spectrum;
  return est;
}

RrEstimate estimate_rr_from_signal(std::span<const double> signal, double rate_hz,
                                   const BandConfig& band, Taper taper) {
  return estimate_rr(periodogram(signal, rate_hz, taper, 1), band);
}

}  // namespace uwbrr
