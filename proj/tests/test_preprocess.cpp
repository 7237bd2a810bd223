#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "uwbrr/preprocess.hpp"

using namespace uwbrr;

namespace {

CirFrame frame_of(std::vector<Complex> taps) {
  CirFrame f;
  f.taps = std::move(taps);
  return f;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("magnitude") {
  const std::vector<CirFrame> frames{frame_of({{3, 4}, {0, 0}}), frame_of({{0, 0}, {0, 0}})};
  const CirMatrix h = magnitude(frames);
  CHECK(h(0, 0) == 5.0);
  CHECK(h(0, 1) == 0.0);
  CHECK(h(1, 0) == 0.0);
  CHECK(h(1, 1) == 0.0);
  CHECK_THROWS_AS(magnitude(std::vector<CirFrame>{}), Error);
  CHECK_THROWS_AS(magnitude(std::vector<CirFrame>{frame_of({{1, 0}}), frame_of({{1, 0}, {2, 0}})}), Error);
}

TEST_CASE("magnitude matches per-element modulus and ignores phase rotation") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1000.0);
  std::uniform_real_distribution<double> phase(-M_PI, M_PI);
  std::vector<Complex> taps(100);
  for (auto& t : taps) t = {g(rng), g(rng)};
  std::vector<Complex> rotated = taps;
  for (auto& t : rotated) t *= std::polar(1.0, phase(rng));
  const CirMatrix h = magnitude(std::vector<CirFrame>{frame_of(taps), frame_of(rotated)});
  for (std::size_t m = 0; m < taps.size(); ++m) {
    const double modulus = std::sqrt(taps[m].real() * taps[m].real() + taps[m].imag() * taps[m].imag());
    CHECK(rel(h(0, m), modulus) < 1e-15);
    CHECK(rel(h(1, m), modulus) < 1e-12);
  }
}

TEST_CASE("calibration identity case") {
  std::vector<double> row(100, 0.01);
  for (int m = 40; m < 47; ++m) row[m] = std::sqrt(7.0);
  row[43] += 1e-12;
  CHECK(calibration_coefficient(row, {}) == doctest::Approx(1.0).epsilon(1e-12));
  const auto out = calibrate(row, {});
  for (std::size_t m = 0; m < row.size(); ++m) CHECK(rel(out[m], row[m]) < 1e-12);
}

TEST_CASE("calibration window is clipped at the row edges") {
  std::vector<double> row(20, 0.0);
  row[0] = 3.0;
  row[1] = 4.0;
  row[19] = 1.0;
  CHECK(direct_path_index(row) == 1);
  CHECK(calibration_coefficient(row, {}) == doctest::Approx(5.0 / 7.0));
  CHECK(calibration_coefficient(row, {}) == doctest::Approx(oracle::calibration_coefficient(row, 3)));
}

TEST_CASE("direct path ties go to the smallest index") {
  const std::vector<double> row{1, 5, 2, 5, 0, 0, 0, 0};
  CHECK(direct_path_index(row) == 1);
}

TEST_CASE("calibration errors") {
  CHECK_THROWS_WITH_AS(calibrate(std::vector<double>(10, 0.0), {}), "degenerate direct path", Error);
  CHECK_THROWS_AS(calibrate(std::vector<double>(6, 1.0), {}), Error);
}

TEST_CASE("calibration laws on random rows") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto row = test_support::random_positive_row(100, rng);
    const auto once = calibrate(row, {});
    const auto twice = calibrate(once, {});
    const double alpha = scale(rng);
    std::vector<double> scaled(row);
    for (double& v : scaled) v *= alpha;
    const auto from_scaled = calibrate(scaled, {});
    const auto literal = oracle::calibrate(row, 3);
    for (std::size_t m = 0; m < row.size(); ++m) {
      REQUIRE(rel(twice[m], once[m]) < 1e-12);
      REQUIRE(rel(from_scaled[m], once[m]) < 1e-12);
      REQUIRE(rel(once[m], literal[m]) < 1e-12);
    }
  }
}

TEST_CASE("complex calibration agrees with magnitude calibration") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  std::vector<Complex> taps(100);
  for (auto& t : taps) t = {g(rng), g(rng)};
  std::vector<double> mags;
  for (auto& t : taps) mags.push_back(std::abs(t));
  const auto a = calibrate_complex(taps, {});
  const auto b = calibrate(mags, {});
  for (std::size_t m = 0; m < taps.size(); ++m) CHECK(rel(std::abs(a[m]), b[m]) < 1e-12);
}

TEST_CASE("best_shift matches brute-force search") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> radius(0, 10);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ref = test_support::random_positive_row(40, rng);
    const auto row = test_support::random_positive_row(40, rng);
    const int r = radius(rng);
    REQUIRE(best_shift(ref, row, r) == oracle::brute_force_shift(ref, row, r));
  }
}

TEST_CASE("alignment examples") {
  std::vector<double> base(30, 0.0);
  base[10] = 1.0;
  base[11] = 3.0;
  base[12] = 1.0;
  base[20] = 0.5;

  CirMatrix same(3, 30);
  for (std::size_t r = 0; r < 3; ++r) std::copy(base.begin(), base.end(), same.row(r).begin());
  auto [aligned_same, result_same] = align(same, 8);
  CHECK(result_same.shifts == std::vector<int>{0, 0, 0});
  CHECK(aligned_same == same);

  CirMatrix delayed(2, 30);
  std::copy(base.begin(), base.end(), delayed.row(0).begin());
  const auto later = shift_row(base, -2);
  std::copy(later.begin(), later.end(), delayed.row(1).begin());
  auto [aligned, result] = align(delayed, 8);
  CHECK(result.shifts[0] == 0);
  CHECK(result.shifts[1] == 2);
  CHECK(result.max_abs_shift == 2);
  for (std::size_t m = 0; m < 28; ++m) CHECK(aligned(1, m) == base[m]);
  CHECK(aligned(1, 28) == 0.0);
  CHECK(aligned(1, 29) == 0.0);

  auto [untouched, none] = align(delayed, 0);
  CHECK(untouched == delayed);
  CHECK(none.max_abs_shift == 0);
}

TEST_CASE("alignment recovers injected jitter") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> jitter(0.0, 2.4);
  std::vector<double> base(100, 0.02);
  base[20] = 0.5;
  base[21] = 1.0;
  base[22] = 0.5;
  base[45] = 0.08;
  CirMatrix h(200, 100);
  std::vector<int> injected(200, 0);
  for (std::size_t n = 0; n < 200; ++n) {
    if (n > 0) injected[n] = std::clamp(static_cast<int>(std::lround(jitter(rng))), -8, 8);
    const auto row = shift_row(base, -injected[n]);
    std::copy(row.begin(), row.end(), h.row(n).begin());
  }
  auto [aligned, result] = align(h, 8);
  CHECK(result.shifts == injected);
}

TEST_CASE("alignment is shift-equivariant") {
  std::mt19937_64 rng(29);
  std::vector<double> base(100, 0.0);
  base[40] = 0.5;
  base[41] = 1.0;
  base[42] = 0.5;
  base[60] = 0.2;
  CirMatrix h(20, 100);
  CirMatrix pre(20, 100);
  std::uniform_int_distribution<int> k(-4, 4);
  for (std::size_t n = 0; n < 20; ++n) {
    const int s = n == 0 ? 0 : k(rng);
    const auto row = shift_row(base, s);
    std::copy(row.begin(), row.end(), h.row(n).begin());
    const auto moved = shift_row(row, 5);
    std::copy(moved.begin(), moved.end(), pre.row(n).begin());
  }
  const auto [a, ra] = align(h, 8);
  const auto [b, rb] = align(pre, 8);
  CHECK(ra.shifts == rb.shifts);
  for (std::size_t n = 0; n < 20; ++n) {
    const auto expected = shift_row(a.row(n), 5);
    for (std::size_t m = 0; m < 100; ++m) {
      if (m >= 8 && m + 5 + 8 < 100) CHECK(b(n, m) == expected[m]);
    }
  }
}

TEST_CASE("preprocess stage ordering") {
  std::vector<CirFrame> frames;
  for (int n = 0; n < 8; ++n) {
    std::vector<Complex> taps(100, Complex(1, 1));
    taps[20 + n % 2] = Complex(0, 50);
    frames.push_back(frame_of(taps));
    frames.back().timestamp = n / 32.0;
  }
  PipelineConfig cfg;
  const auto stages = preprocess(frames, cfg);
  CHECK(stages.magnitude(0, 20) == 50.0);
  CHECK(stages.calibrated(0, 20) == doctest::Approx(50.0 / oracle::calibration_coefficient(
                                                             std::vector<double>(stages.magnitude.row(0).begin(),
                                                                                 stages.magnitude.row(0).end()),
                                                             3)));
  CHECK(stages.alignment.shifts[1] == 1);
  CHECK(stages.aligned(1, 20) == stages.calibrated(1, 21));
  CHECK(stages.aligned.row_times() == stages.magnitude.row_times());

  cfg.alignment.enabled = false;
  const auto unaligned = preprocess(frames, cfg);
  CHECK(unaligned.aligned == unaligned.calibrated);

  cfg.calibrate_before_magnitude = true;
  const auto complex_first = preprocess(frames, cfg);
  for (std::size_t m = 0; m < 100; ++m) {
    CHECK(rel(complex_first.calibrated(3, m), stages.calibrated(3, m)) < 1e-12);
  }
}
