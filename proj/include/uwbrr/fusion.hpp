#pragma once

#include <Eigen/Dense>

#include <vector>

#include "uwbrr/cir_model.hpp"
#include "uwbrr/config.hpp"

namespace uwbrr {

/// Band-of-interest fusion problem for one analysis window.
struct FusionProblem {
  CirMatrix h;  // column-centered unless mean removal is disabled
  BandConfig band;
  double slow_time_rate_hz = 32.0;
  /// Positive DFT bins j with f_low <= j * rate / N <= f_high. The energy form also counts
  /// their negative-frequency mirrors N - j.
  std::vector<std::size_t> in_band_bins;
  /// True when N <= M, in which case B is rank deficient and will be regularized.
  bool underdetermined = false;
};

struct FusionSolution {
  std::vector<double> weights;  // unit norm, first non-negligible entry positive
  double rayleigh = 0.0;        // in-band / total slow-time energy of H w
  std::vector<double> fused;    // H w
  bool regularized = false;
};

/// Positive bins j in [1, N/2] whose frequency j * rate / N lies in [f_low, f_high].
std::vector<std::size_t> band_bins(std::size_t n, double rate_hz, const BandConfig& band);

FusionProblem build_problem(const CirMatrix& h, const BandConfig& band, double slow_time_rate_hz,
                            bool remove_mean = true);

/// Maximizes w^T A w subject to w^T B w = const with A = H^T Re(F_I^H F_I) H and B = N H^T H,
/// as the principal generalized eigenvector of (A, B).
FusionSolution solve(const FusionProblem& problem, double regularization = 1e-9);

/// Generalized Rayleigh quotient w^T A w / w^T B w.
double rayleigh_quotient(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& w);

}  // namespace uwbrr
