// uwbrr: respiratory rate from single-contact UWB channel impulse responses.
//
//   uwbrr process   --trace t.txt [--method uwb|rahman|bates] [--window 120] [--out rr.csv]
//   uwbrr evaluate  --trace a.txt --trace b.txt ... [--out rows.csv] [--aggregates agg.csv]
//   uwbrr sweep     --trace t.txt [--grid 2:119:3] [--step-frac 0.1] [--out sweep.csv]
//   uwbrr simulate  --scenario s.conf --seed 7 --out t.txt
//   uwbrr correlate --results rows.csv | --trace ...

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "uwbrr/config.hpp"
#include "uwbrr/eval.hpp"
#include "uwbrr/ingest.hpp"
#include "uwbrr/pipeline.hpp"
#include "uwbrr/report.hpp"
#include "uwbrr/simulator.hpp"
#include "uwbrr/spectral.hpp"

namespace fs = std::filesystem;
using namespace uwbrr;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<double> band_low;
  std::optional<double> band_high;
  std::optional<double> window_s;
  std::string method = "uwb";
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Key-value config file")->check(CLI::ExistingFile);
  cmd->add_option("--band-low", o.band_low, "Lower respiration band edge (Hz)");
  cmd->add_option("--band-high", o.band_high, "Upper respiration band edge (Hz)");
  cmd->add_option("--window", o.window_s, "Analysis window length (s)");
  cmd->add_option("--method", o.method, "Estimator")->check(CLI::IsMember({"uwb", "rahman", "bates"}));
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
}

PipelineConfig resolve_config(const CommonOptions& o) {
  PipelineConfig cfg = o.config_path.empty() ? PipelineConfig{} : load_config(o.config_path);
  if (o.band_low) cfg.band.f_low_hz = *o.band_low;
  if (o.band_high) cfg.band.f_high_hz = *o.band_high;
  if (o.window_s) cfg.analysis.window_s = *o.window_s;
  require_valid(cfg.geometry, cfg.calibration, cfg.band);
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.empty()) return default_sweep_grid();
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_double("--grid", item));
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw Error("--grid expects start:stop:step with step > 0");
  }
  std::vector<double> grid;
  for (double s = parts[0]; s <= parts[1] + 1e-9; s += parts[2]) grid.push_back(s);
  return grid;
}

std::vector<TraceRecord> load_traces(const std::vector<std::string>& paths, const PipelineConfig& cfg) {
  std::vector<TraceRecord> traces;
  for (const auto& p : paths) traces.push_back(parse_trace(p, cfg.geometry, cfg.analysis.jitter_tolerance).trace);
  return traces;
}

struct DumpOptions {
  std::vector<std::string> stages;
  std::string dir = ".";
  std::string spectrum;
  std::string weights;
  std::size_t window = 0;
};

int run_process(const CommonOptions& o, const std::string& trace_path, const DumpOptions& dump) {
  const PipelineConfig cfg = resolve_config(o);
  const Method method = method_from_string(o.method);
  const ParsedTrace parsed = parse_trace(trace_path, cfg.geometry, cfg.analysis.jitter_tolerance);
  const TraceRecord& trace = parsed.trace;
  const auto windows = analysis_windows(trace, cfg);
  const std::vector<WindowReport> rows = process_trace(trace, method, cfg);

  const bool want_dump = !dump.stages.empty() || !dump.spectrum.empty() || !dump.weights.empty();
  if (want_dump) {
    if (dump.window >= windows.size()) throw Error("--dump-window out of range");
    const WindowSpan& w = windows[dump.window];
    const UwbEstimate est = estimate_uwb(std::span(trace.cir).subspan(w.first, w.count), cfg);
    for (const auto& stage : dump.stages) {
      const CirMatrix* h = nullptr;
      if (stage == "magnitude") h = &est.stages.magnitude;
      else if (stage == "calibrated") h = &est.stages.calibrated;
      else if (stage == "aligned") h = &est.stages.aligned;
      if (stage == "fused") {
        std::string csv = "t_s,fused\n";
        for (std::size_t n = 0; n < est.fusion.fused.size(); ++n) {
          csv += format_number(est.stages.aligned.row_times()[n]) + ',' + format_number(est.fusion.fused[n]) + '\n';
        }
        emit((fs::path(dump.dir) / "stage_fused.csv").string(), csv);
      } else if (h != nullptr) {
        emit((fs::path(dump.dir) / ("stage_" + stage + ".csv")).string(), matrix_csv(*h));
      } else {
        throw Error("--dump-stage: unknown stage '" + stage + "' (magnitude|calibrated|aligned|fused)");
      }
    }
    if (!dump.spectrum.empty()) {
      const Spectrum display =
          cfg.spectral.zero_pad > 1 ? periodogram(est.fusion.fused, cfg.geometry.slow_time_rate_hz,
                                                  cfg.spectral.taper, cfg.spectral.zero_pad)
                                    : est.rr.spectrum;
      emit(dump.spectrum, spectrum_csv(display));
    }
    if (!dump.weights.empty()) emit(dump.weights, weights_csv(est.fusion.weights, cfg.geometry));
  }

  emit(o.out, o.format == "json" ? windows_json(rows, parsed.report) : windows_csv(rows));
  for (const Gap& g : parsed.report.gaps) {
    std::fprintf(stderr, "gap: %s .. %s s\n", format_number(g.start).c_str(), format_number(g.end).c_str());
  }
  if (parsed.report.duplicates_dropped > 0) {
    std::fprintf(stderr, "dropped %zu duplicate frames\n", parsed.report.duplicates_dropped);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Respiratory rate from single-contact UWB channel impulse responses"};
  app.require_subcommand(1);

  CommonOptions process_opts;
  std::string process_trace;
  DumpOptions dump;
  auto* process = app.add_subcommand("process", "Estimate respiratory rate per analysis window of a trace");
  add_common(process, process_opts);
  process->add_option("--trace", process_trace, "Trace file (format v1)")->required()->check(CLI::ExistingFile);
  process->add_option("--dump-stage", dump.stages, "Write an intermediate matrix: magnitude|calibrated|aligned|fused");
  process->add_option("--dump-dir", dump.dir, "Directory for --dump-stage files");
  process->add_option("--dump-spectrum", dump.spectrum, "Write the fused-signal spectrum CSV");
  process->add_option("--dump-weights", dump.weights, "Write the fusion weights CSV");
  process->add_option("--dump-window", dump.window, "Window index used for dumps");

  CommonOptions eval_opts;
  std::vector<std::string> eval_traces;
  std::string aggregates_out;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Metrics over a set of traces");
  add_common(evaluate_cmd, eval_opts);
  evaluate_cmd->add_option("--trace", eval_traces, "Trace files")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--aggregates", aggregates_out, "Per-activity aggregates CSV (csv format only)");

  CommonOptions sweep_opts;
  std::string sweep_trace;
  std::string grid_spec;
  double step_frac = 0.10;
  auto* sweep = app.add_subcommand("sweep", "Success rate as a function of window length");
  add_common(sweep, sweep_opts);
  sweep->add_option("--trace", sweep_trace, "Trace file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--grid", grid_spec, "Window sizes start:stop:step in seconds (default 2:119:3)");
  sweep->add_option("--step-frac", step_frac, "Hop as a fraction of the window size");

  std::string scenario_path;
  std::uint64_t seed = 0;
  std::string sim_out;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic trace with known ground truth");
  simulate_cmd->add_option("--scenario", scenario_path, "Scenario file")->check(CLI::ExistingFile);
  simulate_cmd->add_option("--seed", seed, "Random seed");
  simulate_cmd->add_option("--out", sim_out, "Output trace file")->required();

  CommonOptions corr_opts;
  std::string results_path;
  std::vector<std::string> corr_traces;
  auto* correlate = app.add_subcommand("correlate", "Pearson correlation of SNR and absolute error");
  add_common(correlate, corr_opts);
  correlate->add_option("--results", results_path, "Rows CSV written by evaluate")->check(CLI::ExistingFile);
  correlate->add_option("--trace", corr_traces, "Trace files to evaluate first")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*process) return run_process(process_opts, process_trace, dump);

    if (*evaluate_cmd) {
      const PipelineConfig cfg = resolve_config(eval_opts);
      const auto traces = load_traces(eval_traces, cfg);
      const EvalResult result = evaluate(traces, method_from_string(eval_opts.method), cfg);
      if (eval_opts.format == "json") {
        emit(eval_opts.out, eval_json(result));
      } else {
        emit(eval_opts.out, eval_rows_csv(result));
        if (!aggregates_out.empty()) emit(aggregates_out, eval_aggregates_csv(result));
      }
      return 0;
    }

    if (*sweep) {
      const PipelineConfig cfg = resolve_config(sweep_opts);
      const TraceRecord trace = parse_trace(sweep_trace, cfg.geometry, cfg.analysis.jitter_tolerance).trace;
      const auto grid = parse_grid(grid_spec);
      const auto result = window_sweep(trace, grid, step_frac, method_from_string(sweep_opts.method), cfg);
      emit(sweep_opts.out, sweep_opts.format == "json" ? sweep_json(result) : sweep_csv(result));
      return 0;
    }

    if (*simulate_cmd) {
      const ScenarioFile scenario = scenario_path.empty() ? ScenarioFile{} : load_scenario(scenario_path);
      write_trace(simulate(scenario.scenario, scenario.config.geometry, seed), sim_out);
      return 0;
    }

    if (*correlate) {
      const PipelineConfig cfg = resolve_config(corr_opts);
      EvalResult result;
      if (!results_path.empty()) {
        result = parse_eval_rows_csv(read_file(results_path));
      } else if (!corr_traces.empty()) {
        result = evaluate(load_traces(corr_traces, cfg), method_from_string(corr_opts.method), cfg);
      } else {
        throw Error("correlate needs --results or --trace");
      }
      const double r = snr_error_correlation(result);
      if (corr_opts.format == "json") {
        emit(corr_opts.out, "{\"n\": " + std::to_string(result.rows.size()) + ", \"pearson_r\": " + format_number(r) + "}\n");
      } else {
        emit(corr_opts.out, "n,pearson_r\n" + std::to_string(result.rows.size()) + "," + format_number(r) + "\n");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "uwbrr: %s\n", e.what());
    return 1;
  }
  return 0;
}
