#include <cmath>
#include <numbers>

#include "uwbrr/kernels.hpp"

namespace uwbrr::reference {

void calibrate_rows(CirMatrix& h, const CalibrationConfig& cfg) {
  const int d = cfg.half_window;
  for (std::size_t n = 0; n < h.rows(); ++n) {
    auto row = h.row(n);
    std::size_t peak = 0;
    for (std::size_t m = 0; m < row.size(); ++m) {
      if (std::abs(row[m]) > std::abs(row[peak])) peak = m;
    }
    double energy = 0.0;
    for (std::size_t t = 0; t < row.size(); ++t) {
      const long dist = static_cast<long>(t) - static_cast<long>(peak);
      if (std::labs(dist) <= d) energy += std::abs(row[t]) * std::abs(row[t]);
    }
    const double c = std::sqrt(energy) / (2.0 * d + 1.0);
    if (c == 0.0) throw Error("degenerate direct path");
    for (double& v : row) v = v / c;
  }
}

std::vector<int> alignment_shifts(const CirMatrix& h, int radius) {
  std::vector<int> shifts(h.rows(), 0);
  const long cols = static_cast<long>(h.cols());
  for (std::size_t n = 1; n < h.rows(); ++n) {
    double best_score = -1.0;
    int best = 0;
    // Candidate order 0, -1, 1, -2, 2, ... realizes the tie-break on strict improvement.
    for (int i = 0; i <= 2 * radius; ++i) {
      const int k = (i == 0) ? 0 : ((i % 2 == 1) ? -(i + 1) / 2 : i / 2);
      double sum = 0.0;
      for (long m = 0; m < cols; ++m) {
        const long idx = m + k;
        const double v = (idx >= 0 && idx < cols) ? h(n, static_cast<std::size_t>(idx)) : 0.0;
        sum += h(0, static_cast<std::size_t>(m)) * v;
      }
      if (std::abs(sum) > best_score) {
        best_score = std::abs(sum);
        best = k;
      }
    }
    shifts[n] = best;
  }
  return shifts;
}

CirMatrix apply_shifts(const CirMatrix& h, std::span<const int> shifts) {
  if (shifts.size() != h.rows()) throw Error("apply_shifts: one shift per row required");
  CirMatrix out(h.rows(), h.cols());
  out.row_times() = h.row_times();
  const long cols = static_cast<long>(h.cols());
  for (std::size_t n = 0; n < h.rows(); ++n) {
    for (long m = 0; m < cols; ++m) {
      const long s = m + shifts[n];
      out(n, static_cast<std::size_t>(m)) = (s >= 0 && s < cols) ? h(n, static_cast<std::size_t>(s)) : 0.0;
    }
  }
  return out;
}

Eigen::MatrixXd energy_matrix(const CirMatrix& h) {
  const std::size_t m = h.cols();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<long>(m), static_cast<long>(m));
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) {
      double sum = 0.0;
      for (std::size_t r = 0; r < h.rows(); ++r) sum += h(r, p) * h(r, q);
      b(static_cast<long>(p), static_cast<long>(q)) = static_cast<double>(h.rows()) * sum;
    }
  }
  return b;
}

Eigen::MatrixXd inband_matrix(const CirMatrix& h, std::span<const std::size_t> bins) {
  const std::size_t n = h.rows();
  const std::size_t m = h.cols();
  std::vector<std::size_t> all_bins;
  for (const std::size_t j : bins) {
    all_bins.push_back(j);
    const std::size_t mirror = (n - j) % n;
    if (mirror != j) all_bins.push_back(mirror);
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<long>(m), static_cast<long>(m));
  std::vector<Complex> y(m);
  for (const std::size_t j : all_bins) {
    for (std::size_t p = 0; p < m; ++p) {
      Complex sum = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * r) % n) / static_cast<double>(n);
        sum += h(r, p) * Complex(std::cos(angle), std::sin(angle));
      }
      y[p] = sum;
    }
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = 0; q < m; ++q) {
        a(static_cast<long>(p), static_cast<long>(q)) += (std::conj(y[p]) * y[q]).real();
      }
    }
  }
  return a;
}

std::vector<double> project(const CirMatrix& h, std::span<const double> w) {
  if (w.size() != h.cols()) throw Error("project: weight length must equal column count");
  std::vector<double> out(h.rows(), 0.0);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t c = 0; c < h.cols(); ++c) out[r] += h(r, c) * w[c];
  }
  return out;
}

}  // namespace uwbrr::reference
