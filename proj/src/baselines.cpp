#include "uwbrr/baselines.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uwbrr/spectral.hpp"

namespace uwbrr {

namespace {

struct Biquad {
  double b0, b1, b2, a1, a2;

  void run(std::vector<double>& x) const {
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
    for (double& v : x) {
      const double y = b0 * v + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
      x2 = x1;
      x1 = v;
      y2 = y1;
      y1 = y;
      v = y;
    }
  }
};

// Butterworth (Q = 1/sqrt(2)) sections via the bilinear transform.
Biquad butterworth(double cutoff_hz, double rate_hz, bool highpass) {
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / rate_hz;
  const double cosw = std::cos(w0);
  const double alpha = std::sin(w0) / std::numbers::sqrt2;  // sin(w0) / (2Q)
  const double a0 = 1.0 + alpha;
  const double k = highpass ? (1.0 + cosw) / 2.0 : (1.0 - cosw) / 2.0;
  const double b1 = highpass ? -(1.0 + cosw) : (1.0 - cosw);
  return {k / a0, b1 / a0, k / a0, -2.0 * cosw / a0, (1.0 - alpha) / a0};
}

void require_length(const AccelWindow& win, double min_window_s) {
  const double span = static_cast<double>(win.samples.size()) / win.rate_hz;
  if (span + 1e-9 < min_window_s) {
    throw Error("accelerometer window shorter than " + std::to_string(min_window_s) + " s");
  }
}

std::vector<double> axis(const AccelWindow& win, int which) {
  std::vector<double> out(win.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const AccelSample& s = win.samples[i];
    out[i] = which == 0 ? s.ax : (which == 1 ? s.ay : s.az);
  }
  return out;
}

}  // namespace

AccelWindow make_accel_window(std::span<const AccelSample> samples, double rate_hz, double t0, double t1) {
  AccelWindow win;
  win.rate_hz = rate_hz;
  for (const AccelSample& s : samples) {
    if (s.t >= t0 && s.t < t1) win.samples.push_back(s);
  }
  if (win.samples.empty()) throw Error("accelerometer window is empty");
  double gx = 0.0, gy = 0.0, gz = 0.0;
  for (const AccelSample& s : win.samples) {
    gx += s.ax;
    gy += s.ay;
    gz += s.az;
  }
  const double norm = std::sqrt(gx * gx + gy * gy + gz * gz);
  if (norm > 0.0) win.gravity_mean = {gx / norm, gy / norm, gz / norm};
  return win;
}

std::vector<double> bandpass(std::span<const double> x, double rate_hz, const BandConfig& band) {
  std::vector<double> y(x.begin(), x.end());
  if (y.empty()) return y;
  double mean = 0.0;
  for (const double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  for (double& v : y) v -= mean;
  const Biquad hp = butterworth(band.f_low_hz, rate_hz, true);
  const Biquad lp = butterworth(band.f_high_hz, rate_hz, false);
  hp.run(y);
  lp.run(y);
  std::reverse(y.begin(), y.end());
  hp.run(y);
  lp.run(y);
  std::reverse(y.begin(), y.end());
  return y;
}

int rahman_axis(const AccelWindow& win, const BandConfig& band) {
  int best = 0;
  double best_energy = -1.0;
  for (int a = 0; a < 3; ++a) {
    const auto filtered = bandpass(axis(win, a), win.rate_hz, band);
    double energy = 0.0;
    for (const double v : filtered) energy += v * v;
    if (energy > best_energy) {
      best_energy = energy;
      best = a;
    }
  }
  return best;
}

RrEstimate rr_rahman(const AccelWindow& win, const BandConfig& band, double min_window_s) {
  require_length(win, min_window_s);
  const int chosen = rahman_axis(win, band);
  const auto filtered = bandpass(axis(win, chosen), win.rate_hz, band);
  return estimate_rr_from_signal(filtered, win.rate_hz, band);
}

std::vector<double> tilt_angle(const AccelWindow& win) {
  const Eigen::Vector3d g(win.gravity_mean[0], win.gravity_mean[1], win.gravity_mean[2]);
  std::vector<Eigen::Vector3d> dirs;
  dirs.reserve(win.samples.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const AccelSample& s : win.samples) {
    Eigen::Vector3d a(s.ax, s.ay, s.az);
    const double n = a.norm();
    if (n > 0.0) a /= n;
    dirs.push_back(a);
    const Eigen::Vector3d tangential = a - a.dot(g) * g;
    cov += tangential * tangential.transpose();
  }
  // Dominant tilt direction, perpendicular to g up to round-off.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  Eigen::Vector3d u = eig.eigenvectors().col(2);
  u -= u.dot(g) * g;
  if (u.norm() > 0.0) u.normalize();

  std::vector<double> theta(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) theta[i] = std::atan2(dirs[i].dot(u), dirs[i].dot(g));
  return theta;
}

double motion_level(const AccelWindow& win) {
  const std::size_t n = win.samples.size();
  if (n == 0) return 0.0;
  double mean = 0.0;
  std::vector<double> mags(n);
  for (std::size_t i = 0; i < n; ++i) {
    const AccelSample& s = win.samples[i];
    mags[i] = std::sqrt(s.ax * s.ax + s.ay * s.ay + s.az * s.az);
    mean += mags[i];
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const double m : mags) var += (m - mean) * (m - mean);
  return std::sqrt(var / static_cast<double>(n));
}

std::optional<RrEstimate> rr_bates(const AccelWindow& win, const BandConfig& band,
                                   double motion_threshold_g, double min_window_s) {
  require_length(win, min_window_s);
  if (motion_level(win) > motion_threshold_g) return std::nullopt;
  const auto theta = tilt_angle(win);
  const std::size_t n = theta.size();
  std::vector<double> velocity(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    if (hi > lo) velocity[i] = (theta[hi] - theta[lo]) * win.rate_hz / static_cast<double>(hi - lo);
  }
  return estimate_rr_from_signal(velocity, win.rate_hz, band);
}

}  // namespace uwbrr
