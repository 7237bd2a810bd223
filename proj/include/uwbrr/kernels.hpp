#pragma once

// Matrix-level kernels of the pipeline. `kernels::` runs the outer loops with OpenMP;
// `reference::` holds straightforward serial versions used by the tests and benchmarks
// to check the parallel ones. Every output element of a parallel kernel is produced by
// exactly one thread in a fixed order, so results do not depend on the thread count.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "uwbrr/cir_model.hpp"

namespace uwbrr::kernels {

void calibrate_rows(CirMatrix& h, const CalibrationConfig& cfg);

std::vector<int> alignment_shifts(const CirMatrix& h, int radius);

CirMatrix apply_shifts(const CirMatrix& h, std::span<const int> shifts);

/// B = N * H^T H, the total slow-time spectral energy form (Parseval).
Eigen::MatrixXd energy_matrix(const CirMatrix& h);

/// A = H^T Re(F_I^H F_I) H where I holds the given positive bins and their negative mirrors.
Eigen::MatrixXd inband_matrix(const CirMatrix& h, std::span<const std::size_t> bins);

/// H w.
std::vector<double> project(const CirMatrix& h, std::span<const double> w);

}  // namespace uwbrr::kernels

namespace uwbrr::reference {

void calibrate_rows(CirMatrix& h, const CalibrationConfig& cfg);

std::vector<int> alignment_shifts(const CirMatrix& h, int radius);

CirMatrix apply_shifts(const CirMatrix& h, std::span<const int> shifts);

Eigen::MatrixXd energy_matrix(const CirMatrix& h);

/// Direct DFT sums over each bin and its mirror, no FFT.
Eigen::MatrixXd inband_matrix(const CirMatrix& h, std::span<const std::size_t> bins);

std::vector<double> project(const CirMatrix& h, std::span<const double> w);

}  // namespace uwbrr::reference
