#pragma once

#include <span>
#include <utility>
#include <vector>

#include "uwbrr/cir_model.hpp"
#include "uwbrr/config.hpp"

namespace uwbrr {

struct AlignmentResult {
  std::vector<int> shifts;
  int max_abs_shift = 0;
};

/// Element-wise modulus of each frame's taps, one row per frame in the given order.
CirMatrix magnitude(std::span<const CirFrame> frames);

/// Index of the largest |h[m]|; ties resolve to the smallest index.
std::size_t direct_path_index(std::span<const double> row);

/// Dominant-path coefficient c = sqrt(sum of |h|^2 over the 2D+1 window around the peak) / (2D+1).
/// The window is clipped at the row boundaries.
double calibration_coefficient(std::span<const double> row, const CalibrationConfig& cfg);

/// h'[m] = h[m] / c. Throws Error("degenerate direct path") when c == 0.
std::vector<double> calibrate(std::span<const double> row, const CalibrationConfig& cfg);

/// Complex-domain variant: the coefficient is taken from tap magnitudes, so
/// |calibrate_complex(h)| == calibrate(|h|).
std::vector<Complex> calibrate_complex(std::span<const Complex> taps, const CalibrationConfig& cfg);

/// sum_m reference[m] * row[m + k], with taps outside the row treated as zero.
double shifted_correlation(std::span<const double> reference, std::span<const double> row, int k);

/// argmax_{|k| <= radius} |shifted_correlation(reference, row, k)|; ties go to the smallest |k|,
/// then to the negative shift.
int best_shift(std::span<const double> reference, std::span<const double> row, int radius);

/// out[m] = row[m + k], zero-filled where m + k leaves the row.
std::vector<double> shift_row(std::span<const double> row, int k);

/// Aligns every row to row 0 by cross-correlation maximization.
std::pair<CirMatrix, AlignmentResult> align(const CirMatrix& h, int search_radius);

/// Calibrates every row of a magnitude matrix in place.
void calibrate_rows(CirMatrix& h, const CalibrationConfig& cfg);

struct PreprocessResult {
  CirMatrix magnitude;
  CirMatrix calibrated;
  CirMatrix aligned;
  AlignmentResult alignment;
};

/// magnitude -> calibrate -> align for one analysis window of frames. Alignment uses the
/// window's first row as reference.
PreprocessResult preprocess(std::span<const CirFrame> frames, const PipelineConfig& config);

}  // namespace uwbrr
