#pragma once

// Accelerometer respiration-rate estimators used as comparison pipelines. They follow the
// published descriptions of the methods; every unstated detail is a local choice:
//   - band-pass: 2nd-order Butterworth high-pass at f_low cascaded with a 2nd-order
//     Butterworth low-pass at f_high (4th order overall), run forward and backward;
//   - rahman: the axis with the largest filtered energy is the respiration channel;
//   - bates: signed tilt angle in the plane of mean gravity and the dominant tilt direction,
//     differentiated; windows whose |a| standard deviation exceeds the motion threshold are
//     suppressed.

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "uwbrr/cir_model.hpp"
#include "uwbrr/config.hpp"
#include "uwbrr/ingest.hpp"

namespace uwbrr {

struct AccelWindow {
  std::vector<AccelSample> samples;
  std::array<double, 3> gravity_mean{0.0, 0.0, 1.0};
  double rate_hz = 32.0;
};

/// Copies samples with t in [t0, t1) and computes the normalized mean gravity direction.
AccelWindow make_accel_window(std::span<const AccelSample> samples, double rate_hz,
                              double t0 = -std::numeric_limits<double>::infinity(),
                              double t1 = std::numeric_limits<double>::infinity());

/// Zero-phase band-pass described above.
std::vector<double> bandpass(std::span<const double> x, double rate_hz, const BandConfig& band);

/// Index (0=x, 1=y, 2=z) of the axis chosen by rr_rahman.
int rahman_axis(const AccelWindow& win, const BandConfig& band);

RrEstimate rr_rahman(const AccelWindow& win, const BandConfig& band, double min_window_s = 30.0);

/// Signed tilt angle (rad) of each sample relative to the window's mean gravity direction.
std::vector<double> tilt_angle(const AccelWindow& win);

/// Standard deviation of |a| over the window, in g.
double motion_level(const AccelWindow& win);

/// nullopt means the window was suppressed because of motion.
std::optional<RrEstimate> rr_bates(const AccelWindow& win, const BandConfig& band,
                                   double motion_threshold_g = 0.05, double min_window_s = 30.0);

}  // namespace uwbrr
