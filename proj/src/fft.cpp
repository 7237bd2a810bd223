#include "uwbrr/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace uwbrr::fft {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw Error("fft: allocation failed");
  return std::unique_ptr<T[], FftwFree>(p);
}

}  // namespace

std::vector<Complex> real_dft(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  const std::size_t bins = n / 2 + 1;
  auto in = fftw_buffer<double>(n);
  auto out = fftw_buffer<fftw_complex>(bins);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute(plan.get());
  std::vector<Complex> result(bins);
  for (std::size_t j = 0; j < bins; ++j) result[j] = Complex(out[j][0], out[j][1]);
  return result;
}

std::vector<Complex> column_dfts(std::span<const double> values, std::size_t rows, std::size_t cols) {
  if (values.size() != rows * cols) throw Error("column_dfts: size mismatch");
  if (rows == 0 || cols == 0) return {};
  const std::size_t bins = rows / 2 + 1;
  auto in = fftw_buffer<double>(rows * cols);
  auto out = fftw_buffer<fftw_complex>(bins * cols);
  const int n = static_cast<int>(rows);
  const int howmany = static_cast<int>(cols);
  const int stride = static_cast<int>(cols);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_many_dft_r2c(1, &n, howmany, in.get(), nullptr, stride, 1, out.get(),
                                      nullptr, stride, 1, FFTW_ESTIMATE));
  }
  std::copy(values.begin(), values.end(), in.get());
  fftw_execute(plan.get());
  std::vector<Complex> result(bins * cols);
  for (std::size_t k = 0; k < bins * cols; ++k) result[k] = Complex(out[k][0], out[k][1]);
  return result;
}

}  // namespace uwbrr::fft
