#include "uwbrr/kernels.hpp"

#include <atomic>
#include <cmath>

#include "uwbrr/fft.hpp"
#include "uwbrr/preprocess.hpp"

namespace uwbrr::kernels {

void calibrate_rows(CirMatrix& h, const CalibrationConfig& cfg) {
  const long rows = static_cast<long>(h.rows());
  std::atomic<bool> degenerate{false};
#pragma omp parallel for schedule(static)
  for (long n = 0; n < rows; ++n) {
    auto row = h.row(static_cast<std::size_t>(n));
    const double c = calibration_coefficient(row, cfg);
    if (c == 0.0) {
      degenerate = true;
      continue;
    }
    for (double& v : row) v /= c;
  }
  if (degenerate) throw Error("degenerate direct path");
}

std::vector<int> alignment_shifts(const CirMatrix& h, int radius) {
  std::vector<int> shifts(h.rows(), 0);
  if (h.rows() == 0 || radius == 0) return shifts;
  const auto reference_row = h.row(0);
  const long rows = static_cast<long>(h.rows());
#pragma omp parallel for schedule(static)
  for (long n = 1; n < rows; ++n) {
    shifts[static_cast<std::size_t>(n)] = best_shift(reference_row, h.row(static_cast<std::size_t>(n)), radius);
  }
  return shifts;
}

CirMatrix apply_shifts(const CirMatrix& h, std::span<const int> shifts) {
  if (shifts.size() != h.rows()) throw Error("apply_shifts: one shift per row required");
  CirMatrix out(h.rows(), h.cols());
  out.row_times() = h.row_times();
  const long rows = static_cast<long>(h.rows());
  const long cols = static_cast<long>(h.cols());
#pragma omp parallel for schedule(static)
  for (long n = 0; n < rows; ++n) {
    const auto src = h.row(static_cast<std::size_t>(n));
    auto dst = out.row(static_cast<std::size_t>(n));
    const long k = shifts[static_cast<std::size_t>(n)];
    for (long m = 0; m < cols; ++m) {
      const long s = m + k;
      dst[m] = (s >= 0 && s < cols) ? src[s] : 0.0;
    }
  }
  return out;
}

Eigen::MatrixXd energy_matrix(const CirMatrix& h) {
  const long n = static_cast<long>(h.rows());
  const long m = static_cast<long>(h.cols());
  Eigen::MatrixXd b(m, m);
  // Column-major copy so each inner product runs over contiguous memory.
  std::vector<double> columns(static_cast<std::size_t>(n * m));
  const auto values = h.values();
  for (long r = 0; r < n; ++r) {
    for (long c = 0; c < m; ++c) columns[c * n + r] = values[r * m + c];
  }
#pragma omp parallel for schedule(dynamic)
  for (long p = 0; p < m; ++p) {
    const double* cp = columns.data() + p * n;
    for (long q = p; q < m; ++q) {
      const double* cq = columns.data() + q * n;
      double sum = 0.0;
#pragma omp simd reduction(+ : sum)
      for (long r = 0; r < n; ++r) sum += cp[r] * cq[r];
      b(p, q) = static_cast<double>(n) * sum;
      b(q, p) = b(p, q);
    }
  }
  return b;
}

Eigen::MatrixXd inband_matrix(const CirMatrix& h, std::span<const std::size_t> bins) {
  const std::size_t n = h.rows();
  const long m = static_cast<long>(h.cols());
  const auto spectra = fft::column_dfts(h.values(), n, h.cols());
  for (const std::size_t j : bins) {
    if (j > n / 2) throw Error("inband_matrix: bin beyond N/2");
  }
  Eigen::MatrixXd a(m, m);
#pragma omp parallel for schedule(dynamic)
  for (long p = 0; p < m; ++p) {
    for (long q = p; q < m; ++q) {
      double sum = 0.0;
      for (const std::size_t j : bins) {
        // Bin j and its mirror N-j contribute equally for real columns; 0 and N/2 are self-mirrored.
        const double weight = (j == 0 || 2 * j == n) ? 1.0 : 2.0;
        const Complex yp = spectra[j * h.cols() + static_cast<std::size_t>(p)];
        const Complex yq = spectra[j * h.cols() + static_cast<std::size_t>(q)];
        sum += weight * (yp.real() * yq.real() + yp.imag() * yq.imag());
      }
      a(p, q) = sum;
      a(q, p) = sum;
    }
  }
  return a;
}

std::vector<double> project(const CirMatrix& h, std::span<const double> w) {
  if (w.size() != h.cols()) throw Error("project: weight length must equal column count");
  std::vector<double> out(h.rows(), 0.0);
  const long rows = static_cast<long>(h.rows());
#pragma omp parallel for schedule(static)
  for (long r = 0; r < rows; ++r) {
    const auto row = h.row(static_cast<std::size_t>(r));
    double sum = 0.0;
    for (std::size_t c = 0; c < w.size(); ++c) sum += row[c] * w[c];
    out[static_cast<std::size_t>(r)] = sum;
  }
  return out;
}

}  // namespace uwbrr::kernels
