#pragma once

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "uwbrr/cir_model.hpp"

namespace test_support {

inline uwbrr::CirMatrix to_cir(const Eigen::MatrixXd& m, double rate = 32.0) {
  uwbrr::CirMatrix h(m.rows(), m.cols());
  for (long r = 0; r < m.rows(); ++r) {
    h.row_times()[r] = r / rate;
    for (long c = 0; c < m.cols(); ++c) h(r, c) = m(r, c);
  }
  return h;
}

inline Eigen::MatrixXd to_eigen(const uwbrr::CirMatrix& h) {
  Eigen::MatrixXd m(h.rows(), h.cols());
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t c = 0; c < h.cols(); ++c) m(r, c) = h(r, c);
  }
  return m;
}

inline std::vector<double> sinusoid(std::size_t n, double rate, double freq, double amp = 1.0,
                                    double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * M_PI * freq * i / rate + phase);
  return x;
}

inline std::vector<double> random_positive_row(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> row(m);
  for (double& v : row) v = u(rng);
  return row;
}

}  // namespace test_support
