#include "uwbrr/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "uwbrr/kernels.hpp"

namespace uwbrr {

CirMatrix magnitude(std::span<const CirFrame> frames) {
  if (frames.empty()) throw Error("magnitude: no frames");
  const std::size_t cols = frames.front().taps.size();
  CirMatrix h(frames.size(), cols);
  for (std::size_t n = 0; n < frames.size(); ++n) {
    if (frames[n].taps.size() != cols) throw Error("magnitude: non-uniform tap count");
    auto row = h.row(n);
    // sqrt(norm): hypot's overflow guard is unnecessary at accumulator amplitudes.
    for (std::size_t m = 0; m < cols; ++m) row[m] = std::sqrt(std::norm(frames[n].taps[m]));
    h.row_times()[n] = frames[n].timestamp;
  }
  return h;
}

std::size_t direct_path_index(std::span<const double> row) {
  if (row.empty()) throw Error("direct_path_index: empty row");
  std::size_t best = 0;
  for (std::size_t m = 1; m < row.size(); ++m) {
    if (std::abs(row[m]) > std::abs(row[best])) best = m;
  }
  return best;
}

double calibration_coefficient(std::span<const double> row, const CalibrationConfig& cfg) {
  if (row.size() < static_cast<std::size_t>(cfg.span())) {
    throw Error("calibrate: row shorter than 2D+1 taps");
  }
  const auto peak = static_cast<long>(direct_path_index(row));
  const long lo = std::max(0L, peak - cfg.half_window);
  const long hi = std::min(static_cast<long>(row.size()) - 1, peak + cfg.half_window);
  double energy = 0.0;
  for (long t = lo; t <= hi; ++t) energy += row[t] * row[t];
  return std::sqrt(energy) / static_cast<double>(cfg.span());
}

std::vector<double> calibrate(std::span<const double> row, const CalibrationConfig& cfg) {
  const double c = calibration_coefficient(row, cfg);
  if (c == 0.0) throw Error("degenerate direct path");
  std::vector<double> out(row.size());
  for (std::size_t m = 0; m < row.size(); ++m) out[m] = row[m] / c;
  return out;
}

std::vector<Complex> calibrate_complex(std::span<const Complex> taps, const CalibrationConfig& cfg) {
  std::vector<double> mags(taps.size());
  for (std::size_t m = 0; m < taps.size(); ++m) mags[m] = std::abs(taps[m]);
  const double c = calibration_coefficient(mags, cfg);
  if (c == 0.0) throw Error("degenerate direct path");
  std::vector<Complex> out(taps.size());
  for (std::size_t m = 0; m < taps.size(); ++m) out[m] = taps[m] / c;
  return out;
}

double shifted_correlation(std::span<const double> reference, std::span<const double> row, int k) {
  const long m_count = static_cast<long>(std::min(reference.size(), row.size()));
  const long lo = std::max(0L, -static_cast<long>(k));
  const long hi = std::min(m_count, static_cast<long>(row.size()) - k);
  const double* ref = reference.data();
  const double* other = row.data();
  double sum = 0.0;
#pragma omp simd reduction(+ : sum)
  for (long m = lo; m < hi; ++m) sum += ref[m] * other[m + k];
  return sum;
}

int best_shift(std::span<const double> reference, std::span<const double> row, int radius) {
  int best = 0;
  double best_score = std::abs(shifted_correlation(reference, row, 0));
  for (int mag = 1; mag <= radius; ++mag) {
    for (const int k : {-mag, mag}) {
      const double score = std::abs(shifted_correlation(reference, row, k));
      if (score > best_score) {
        best_score = score;
        best = k;
      }
    }
  }
  return best;
}

std::vector<double> shift_row(std::span<const double> row, int k) {
  const long n = static_cast<long>(row.size());
  std::vector<double> out(row.size(), 0.0);
  for (long m = 0; m < n; ++m) {
    const long src = m + k;
    if (src >= 0 && src < n) out[m] = row[src];
  }
  return out;
}

std::pair<CirMatrix, AlignmentResult> align(const CirMatrix& h, int search_radius) {
  if (search_radius < 0) throw Error("align: negative search radius");
  AlignmentResult result;
  result.shifts = kernels::alignment_shifts(h, search_radius);
  for (const int k : result.shifts) result.max_abs_shift = std::max(result.max_abs_shift, std::abs(k));
  return {kernels::apply_shifts(h, result.shifts), std::move(result)};
}

void calibrate_rows(CirMatrix& h, const CalibrationConfig& cfg) { kernels::calibrate_rows(h, cfg); }

PreprocessResult preprocess(std::span<const CirFrame> frames, const PipelineConfig& config) {
  PreprocessResult out;
  if (config.calibrate_before_magnitude) {
    std::vector<CirFrame> calibrated(frames.begin(), frames.end());
    for (CirFrame& f : calibrated) f.taps = calibrate_complex(f.taps, config.calibration);
    out.magnitude = magnitude(frames);
    out.calibrated = magnitude(calibrated);
  } else {
    out.magnitude = magnitude(frames);
    out.calibrated = out.magnitude;
    calibrate_rows(out.calibrated, config.calibration);
  }
  if (config.alignment.enabled) {
    auto [aligned, result] = align(out.calibrated, config.alignment.search_radius);
    out.aligned = std::move(aligned);
    out.alignment = std::move(result);
  } else {
    out.aligned = out.calibrated;
    out.alignment.shifts.assign(out.aligned.rows(), 0);
  }
  return out;
}

}  // namespace uwbrr
