#include <doctest.h>

#include <Eigen/Geometry>

#include <random>

#include "uwbrr/baselines.hpp"

using namespace uwbrr;

namespace {

constexpr double kRate = 32.0;

std::vector<AccelSample> tilt_stream(double seconds, double freq_hz, double amp_deg, double noise_g,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, noise_g);
  std::vector<AccelSample> out;
  const std::size_t n = static_cast<std::size_t>(seconds * kRate);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i / kRate;
    const double theta = amp_deg * M_PI / 180.0 * std::sin(2.0 * M_PI * freq_hz * t);
    out.push_back({t, g(rng), std::sin(theta) + g(rng), std::cos(theta) + g(rng)});
  }
  return out;
}

std::vector<AccelSample> rotate(const std::vector<AccelSample>& in, const Eigen::Matrix3d& r) {
  std::vector<AccelSample> out;
  for (const auto& s : in) {
    const Eigen::Vector3d v = r * Eigen::Vector3d(s.ax, s.ay, s.az);
    out.push_back({s.t, v[0], v[1], v[2]});
  }
  return out;
}

}  // namespace

TEST_CASE("make_accel_window normalizes gravity and selects the time range") {
  const auto samples = tilt_stream(60.0, 0.25, 2.0, 0.0, 1);
  const AccelWindow win = make_accel_window(samples, kRate, 10.0, 40.0);
  CHECK(win.samples.size() == 960);
  CHECK(win.samples.front().t == doctest::Approx(10.0));
  const double norm = std::sqrt(win.gravity_mean[0] * win.gravity_mean[0] + win.gravity_mean[1] * win.gravity_mean[1] +
                                win.gravity_mean[2] * win.gravity_mean[2]);
  CHECK(norm == doctest::Approx(1.0));
}

TEST_CASE("rahman: tilt on one axis") {
  const AccelWindow win = make_accel_window(tilt_stream(120.0, 0.25, 2.0, 0.002, 2), kRate);
  CHECK(rahman_axis(win, {}) == 1);
  CHECK(rr_rahman(win, {}).rate_bpm == doctest::Approx(15.0));
}

TEST_CASE("rahman: all-zero input follows the tie rule") {
  std::vector<AccelSample> zeros;
  for (int i = 0; i < 32 * 40; ++i) zeros.push_back({i / kRate, 0.0, 0.0, 0.0});
  const AccelWindow win = make_accel_window(zeros, kRate);
  const RrEstimate a = rr_rahman(win, {});
  const RrEstimate b = rr_rahman(win, {});
  const double first_bin = std::ceil(0.1 * 1280 / kRate) * kRate / 1280;
  CHECK(a.peak_frequency == doctest::Approx(first_bin));
  CHECK(a.rate_bpm == b.rate_bpm);
}

TEST_CASE("rahman: walking cadence is deterministic") {
  auto samples = tilt_stream(60.0, 0.25, 2.0, 0.002, 3);
  const double breathing_amp = std::sin(2.0 * M_PI / 180.0);
  for (auto& s : samples) s.ay += 5.0 * breathing_amp * std::sin(2.0 * M_PI * 1.7 * s.t);
  const AccelWindow win = make_accel_window(samples, kRate);
  CHECK(rr_rahman(win, {}).rate_bpm == rr_rahman(win, {}).rate_bpm);
}

TEST_CASE("rahman: axis permutations keep the rate") {
  const auto samples = tilt_stream(90.0, 0.3, 3.0, 0.002, 4);
  const double base = rr_rahman(make_accel_window(samples, kRate), {}).rate_bpm;
  Eigen::Matrix3d cyclic;
  cyclic << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  Eigen::Matrix3d swap;
  swap << 0, 1, 0, 1, 0, 0, 0, 0, 1;
  CHECK(rr_rahman(make_accel_window(rotate(samples, cyclic), kRate), {}).rate_bpm == base);
  CHECK(rr_rahman(make_accel_window(rotate(samples, swap), kRate), {}).rate_bpm == base);
  CHECK(base == doctest::Approx(18.0));
}

TEST_CASE("bates: stationary tilt oscillation") {
  const AccelWindow win = make_accel_window(tilt_stream(120.0, 0.2, 2.0, 0.0005, 5), kRate);
  const auto est = rr_bates(win, {});
  REQUIRE(est.has_value());
  CHECK(est->rate_bpm == doctest::Approx(12.0));
}

TEST_CASE("bates: shaking is suppressed") {
  const AccelWindow win = make_accel_window(tilt_stream(60.0, 0.2, 2.0, 0.2, 6), kRate);
  CHECK(motion_level(win) > 0.05);
  CHECK_FALSE(rr_bates(win, {}).has_value());
}

TEST_CASE("bates: rotated sensor frame gives the same rate") {
  const auto samples = tilt_stream(120.0, 0.2, 2.0, 0.0005, 7);
  const auto base = rr_bates(make_accel_window(samples, kRate), {});
  const Eigen::Matrix3d r =
      (Eigen::AngleAxisd(0.7, Eigen::Vector3d::UnitX()) * Eigen::AngleAxisd(-1.1, Eigen::Vector3d::UnitZ()))
          .toRotationMatrix();
  const auto rotated = rr_bates(make_accel_window(rotate(samples, r), kRate), {});
  REQUIRE(base.has_value());
  REQUIRE(rotated.has_value());
  CHECK(rotated->rate_bpm == base->rate_bpm);
}

TEST_CASE("bates: suppression is monotone in the threshold") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AccelWindow win = make_accel_window(tilt_stream(40.0, 0.25, 2.0, 0.01 * seed, seed), kRate);
    bool reported = false;
    for (double threshold = 0.0; threshold <= 0.2; threshold += 0.01) {
      const bool now = rr_bates(win, {}, threshold).has_value();
      CHECK((!reported || now));
      reported = reported || now;
    }
  }
}

TEST_CASE("signed tilt angle follows the injected tilt") {
  const AccelWindow win = make_accel_window(tilt_stream(40.0, 0.25, 2.0, 0.0, 8), kRate);
  const auto theta = tilt_angle(win);
  double peak = 0.0;
  for (double v : theta) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(2.0 * M_PI / 180.0).epsilon(0.02));
}

TEST_CASE("windows shorter than the minimum are rejected") {
  const AccelWindow win = make_accel_window(tilt_stream(20.0, 0.25, 2.0, 0.0, 9), kRate);
  CHECK_THROWS_AS(rr_rahman(win, {}), Error);
  CHECK_THROWS_AS(rr_bates(win, {}), Error);
  CHECK(rr_rahman(win, {}, 10.0).rate_bpm == doctest::Approx(15.0));
}
