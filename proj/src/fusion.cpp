#include "uwbrr/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "uwbrr/kernels.hpp"

namespace uwbrr {

std::vector<std::size_t> band_bins(std::size_t n, double rate_hz, const BandConfig& band) {
  std::vector<std::size_t> bins;
  const double nd = static_cast<double>(n);
  constexpr double kSlack = 1e-9;
  for (std::size_t j = 1; j <= n / 2; ++j) {
    // j * rate / N compared in the scaled domain to keep exact bin hits exact.
    const double scaled = static_cast<double>(j) * rate_hz;
    if (scaled >= band.f_low_hz * nd - kSlack && scaled <= band.f_high_hz * nd + kSlack) bins.push_back(j);
  }
  return bins;
}

FusionProblem build_problem(const CirMatrix& h, const BandConfig& band, double slow_time_rate_hz,
                            bool remove_mean) {
  if (h.rows() < 4) throw Error("build_problem: need at least 4 slow-time samples");
  if (h.cols() == 0) throw Error("build_problem: no fast-time columns");
  FusionProblem problem;
  problem.band = band;
  problem.slow_time_rate_hz = slow_time_rate_hz;
  problem.h = h;
  if (remove_mean) {
    for (std::size_t c = 0; c < h.cols(); ++c) {
      double mean = 0.0;
      for (std::size_t r = 0; r < h.rows(); ++r) mean += h(r, c);
      mean /= static_cast<double>(h.rows());
      for (std::size_t r = 0; r < h.rows(); ++r) problem.h(r, c) = h(r, c) - mean;
    }
  }
  problem.in_band_bins = band_bins(h.rows(), slow_time_rate_hz, band);
  if (problem.in_band_bins.empty()) throw Error("band unresolvable at this window length");
  problem.underdetermined = h.rows() <= h.cols();
  return problem;
}

double rayleigh_quotient(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& w) {
  return w.dot(a * w) / w.dot(b * w);
}

FusionSolution solve(const FusionProblem& problem, double regularization) {
  const Eigen::MatrixXd a = kernels::inband_matrix(problem.h, problem.in_band_bins);
  const Eigen::MatrixXd b = kernels::energy_matrix(problem.h);
  const long m = b.rows();

  const double trace = b.trace();
  if (!(trace > 0.0) || !std::isfinite(trace)) throw Error("degenerate window");

  FusionSolution solution;
  Eigen::MatrixXd b_work = b;
  Eigen::LLT<Eigen::MatrixXd> llt(b_work);
  const double ridge = regularization * trace / static_cast<double>(m);
  const auto pivots_ok = [&] {
    if (llt.info() != Eigen::Success) return false;
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    return diag.cwiseAbs2().minCoeff() > ridge;
  };
  if (!pivots_ok()) {
    b_work.diagonal().array() += ridge;
    llt.compute(b_work);
    solution.regularized = true;
    if (llt.info() != Eigen::Success) throw Error("degenerate window");
  }

  // C = L^{-1} A L^{-T}; the top eigenvector y of C maps back through w = L^{-T} y.
  const auto lower = llt.matrixL();
  Eigen::MatrixXd c = lower.solve(a);
  c = lower.solve(c.transpose()).transpose();
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  if (eig.info() != Eigen::Success) throw Error("degenerate window");
  const Eigen::VectorXd y = eig.eigenvectors().col(m - 1);
  Eigen::VectorXd w = llt.matrixU().solve(y);

  const double norm = w.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw Error("degenerate window");
  w /= norm;
  const double largest = w.cwiseAbs().maxCoeff();
  for (long i = 0; i < m; ++i) {
    if (std::abs(w(i)) > 1e-12 * largest) {
      if (w(i) < 0.0) w = -w;
      break;
    }
  }

  const double total = w.dot(b * w);
  solution.rayleigh = total > 0.0 ? std::clamp(w.dot(a * w) / total, 0.0, 1.0) : 0.0;
  solution.weights.assign(w.data(), w.data() + m);
  solution.fused = kernels::project(problem.h, solution.weights);
  return solution;
}

}  // namespace uwbrr
