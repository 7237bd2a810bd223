#pragma once

#include <span>

#include "uwbrr/cir_model.hpp"
#include "uwbrr/config.hpp"

namespace uwbrr {

/// power[j] = |DFT(x - mean(x))[j]|^2 for j = 0..floor(N/2), optionally Hann-tapered.
/// `zero_pad` > 1 interpolates the display grid only.
Spectrum periodogram(std::span<const double> signal, double rate_hz, Taper taper = Taper::none,
                     int zero_pad = 1);

/// Signal power within +-width/2 bpm of `peak_hz` divided by the remaining non-DC power.
/// Returns +infinity when the remaining power is zero (or round-off, below 1e-20 of the total).
double snr(const Spectrum& spectrum, double peak_hz, double band_width_bpm);

/// Highest in-band bin (ties resolve to the lower frequency), with SNR attached.
RrEstimate estimate_rr(const Spectrum& spectrum, const BandConfig& band);

/// periodogram + estimate_rr with the configured taper, never zero-padded.
RrEstimate estimate_rr_from_signal(std::span<const double> signal, double rate_hz,
                                   const BandConfig& band, Taper taper = Taper::none);

}  // namespace uwbrr
