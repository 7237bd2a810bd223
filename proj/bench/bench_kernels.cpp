// OpenMP kernels against their serial references on one analysis window
// (3840 slow-time rows x 100 taps, i.e. 120 s at 32 Hz).
//
//   ./uwbrr_bench --benchmark_filter=energy
//   OMP_NUM_THREADS=8 ./uwbrr_bench

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "uwbrr/fusion.hpp"
#include "uwbrr/kernels.hpp"
#include "uwbrr/pipeline.hpp"
#include "uwbrr/simulator.hpp"

using namespace uwbrr;

namespace {

const CirMatrix& window_matrix(std::size_t rows) {
  static std::map<std::size_t, CirMatrix> cache;
  auto it = cache.find(rows);
  if (it != cache.end()) return it->second;
  std::mt19937_64 rng(rows);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CirMatrix h(rows, 100);
  for (double& v : h.values()) v = u(rng);
  return cache.emplace(rows, std::move(h)).first->second;
}

template <auto Fn>
void calibrate(benchmark::State& state) {
  const CirMatrix& src = window_matrix(state.range(0));
  for (auto _ : state) {
    CirMatrix h = src;
    Fn(h, CalibrationConfig{});
    benchmark::DoNotOptimize(h.values().data());
  }
}

template <auto Fn>
void shifts(benchmark::State& state) {
  const CirMatrix& h = window_matrix(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(h, 8));
}

template <auto Fn>
void energy(benchmark::State& state) {
  const CirMatrix& h = window_matrix(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(h));
}

template <auto Fn>
void inband(benchmark::State& state) {
  const CirMatrix& h = window_matrix(state.range(0));
  const auto bins = band_bins(h.rows(), 32.0, BandConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(Fn(h, bins));
}

template <auto Fn>
void project(benchmark::State& state) {
  const CirMatrix& h = window_matrix(state.range(0));
  const std::vector<double> w(h.cols(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(h, w));
}

void full_window(benchmark::State& state) {
  SimScenario s;
  s.duration_s = static_cast<double>(state.range(0)) / 32.0;
  s.noise_std = 0.01;
  const TraceRecord trace = simulate(s, SamplingGeometry{}, 1);
  const PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_uwb(trace.cir, cfg).rr.rate_bpm);
}

}  // namespace

#define PAIR(name, kernel)                                                                   \
  BENCHMARK(name<kernels::kernel>)->Name(#name "/parallel")->Arg(960)->Arg(3840);            \
  BENCHMARK(name<reference::kernel>)->Name(#name "/serial")->Arg(960)->Arg(3840)

PAIR(calibrate, calibrate_rows);
PAIR(shifts, alignment_shifts);
PAIR(energy, energy_matrix);
PAIR(project, project);
BENCHMARK(inband<kernels::inband_matrix>)->Name("inband/parallel_fft")->Arg(960)->Arg(3840);
BENCHMARK(inband<reference::inband_matrix>)->Name("inband/serial_direct_dft")->Arg(960);
BENCHMARK(full_window)->Arg(960)->Arg(3840)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
