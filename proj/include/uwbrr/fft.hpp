#pragma once

#include <span>
#include <vector>

#include "uwbrr/cir_model.hpp"

namespace uwbrr::fft {

/// Unnormalized forward DFT of a real series, bins 0..N/2 (X_j = sum_n x_n e^{-2 pi i j n / N}).
std::vector<Complex> real_dft(std::span<const double> x);

/// Forward DFT of every column of a row-major rows x cols matrix. Result is row-major with
/// rows/2+1 rows (bins) and `cols` columns.
std::vector<Complex> column_dfts(std::span<const double> values, std::size_t rows, std::size_t cols);

}  // namespace uwbrr::fft
