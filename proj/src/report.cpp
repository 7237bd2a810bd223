#include "uwbrr/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace uwbrr {

namespace {

using nlohmann::json;

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// JSON has no infinity; the SNR sentinel is written as the string "inf".
json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<WindowReport> process_trace(const TraceRecord& trace, Method method, const PipelineConfig& config) {
  const auto windows = analysis_windows(trace, config);
  std::vector<WindowReport> rows(windows.size());
  const long count = static_cast<long>(windows.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const WindowSpan& w = windows[idx];
    WindowReport& r = rows[idx];
    r.index = idx;
    r.t0 = w.t0;
    r.t1 = w.t1;
    r.method = to_string(method);
    try {
      r.ref_bpm = reference_rate(trace, w, config);
      if (method == Method::uwb) {
        const UwbEstimate est = estimate_uwb(std::span(trace.cir).subspan(w.first, w.count), config);
        r.rr_bpm = est.rr.rate_bpm;
        r.snr = est.rr.snr;
        r.peak_hz = est.rr.peak_frequency;
        r.rayleigh = est.fusion.rayleigh;
      } else if (const auto est = estimate_window(trace, w, method, config)) {
        r.rr_bpm = est->rate_bpm;
        r.snr = est->snr;
        r.peak_hz = est->peak_frequency;
      } else {
        r.status = "suppressed";
      }
    } catch (const Error& e) {
      r.status = std::string("error: ") + e.what();
    }
  }
  return rows;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string windows_csv(std::span<const WindowReport> rows) {
  std::string out = "window,t_start_s,t_end_s,method,rr_bpm,snr,peak_hz,rayleigh,ref_bpm,abs_err_bpm,status\n";
  for (const WindowReport& r : rows) {
    std::optional<double> err;
    if (r.rr_bpm && r.ref_bpm) err = std::abs(*r.rr_bpm - *r.ref_bpm);
    out += std::to_string(r.index) + ',' + format_number(r.t0) + ',' + format_number(r.t1) + ',' + r.method + ',' +
           opt(r.rr_bpm) + ',' + (r.rr_bpm ? format_number(r.snr) : "") + ',' +
           (r.rr_bpm ? format_number(r.peak_hz) : "") + ',' + opt(r.rayleigh) + ',' + opt(r.ref_bpm) + ',' +
           opt(err) + ',' + r.status + '\n';
  }
  return out;
}

std::string windows_json(std::span<const WindowReport> rows, const IngestReport& ingest) {
  json doc;
  doc["ingest"] = {{"frames_read", ingest.frames_read},
                   {"duplicates_dropped", ingest.duplicates_dropped},
                   {"clock_skew_estimate_s", ingest.clock_skew_estimate}};
  doc["ingest"]["gaps"] = json::array();
  for (const Gap& g : ingest.gaps) doc["ingest"]["gaps"].push_back({{"start_s", g.start}, {"end_s", g.end}});
  doc["windows"] = json::array();
  for (const WindowReport& r : rows) {
    doc["windows"].push_back({{"window", r.index},
                              {"t_start_s", r.t0},
                              {"t_end_s", r.t1},
                              {"method", r.method},
                              {"rr_bpm", opt_json(r.rr_bpm)},
                              {"snr", r.rr_bpm ? number_json(r.snr) : json(nullptr)},
                              {"peak_hz", r.rr_bpm ? json(r.peak_hz) : json(nullptr)},
                              {"rayleigh", opt_json(r.rayleigh)},
                              {"ref_bpm", opt_json(r.ref_bpm)},
                              {"status", r.status}});
  }
  return doc.dump(2) + "\n";
}

std::string eval_rows_csv(const EvalResult& result) {
  std::string out = "id,activity,method,rr_est_bpm,rr_ref_bpm,abs_err_bpm,snr,suppressed\n";
  for (const EvalRow& r : result.rows) {
    out += r.id + ',' + r.activity + ',' + r.method + ',' + format_number(r.rr_est) + ',' + format_number(r.rr_ref) +
           ',' + format_number(r.abs_err) + ',' + format_number(r.snr) + ',' + (r.suppressed ? "1" : "0") + '\n';
  }
  return out;
}

std::string eval_aggregates_csv(const EvalResult& result) {
  std::string out = "activity,n,rmse_bpm,mape_pct,success_rate,mean_snr\n";
  for (const ActivityAggregate& a : result.aggregates) {
    out += a.activity + ',' + std::to_string(a.n) + ',' + format_number(a.rmse) + ',' + format_number(a.mape) + ',' +
           format_number(a.success_rate) + ',' + format_number(a.mean_snr) + '\n';
  }
  return out;
}

std::string eval_json(const EvalResult& result) {
  json doc;
  doc["rows"] = json::array();
  for (const EvalRow& r : result.rows) {
    doc["rows"].push_back({{"id", r.id},
                           {"activity", r.activity},
                           {"method", r.method},
                           {"rr_est_bpm", r.rr_est},
                           {"rr_ref_bpm", r.rr_ref},
                           {"abs_err_bpm", r.abs_err},
                           {"snr", number_json(r.snr)},
                           {"suppressed", r.suppressed}});
  }
  doc["aggregates"] = json::array();
  for (const ActivityAggregate& a : result.aggregates) {
    doc["aggregates"].push_back({{"activity", a.activity},
                                 {"n", a.n},
                                 {"rmse_bpm", a.rmse},
                                 {"mape_pct", a.mape},
                                 {"success_rate", a.success_rate},
                                 {"mean_snr", a.mean_snr}});
  }
  doc["excluded_no_reference"] = result.excluded_no_reference;
  doc["failed"] = result.failed;
  return doc.dump(2) + "\n";
}

EvalResult parse_eval_rows_csv(const std::string& text) {
  EvalResult result;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.starts_with("id,"))) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) throw Error("results line " + std::to_string(line_no) + ": expected 8 fields");
    EvalRow r;
    r.id = f[0];
    r.activity = f[1];
    r.method = f[2];
    const auto num = [&](const std::string& s) {
      if (s == "inf") return std::numeric_limits<double>::infinity();
      return parse_double("results line " + std::to_string(line_no), s);
    };
    r.rr_est = num(f[3]);
    r.rr_ref = num(f[4]);
    r.abs_err = num(f[5]);
    r.snr = num(f[6]);
    r.suppressed = f[7] == "1";
    result.rows.push_back(r);
  }
  result.aggregates = aggregate(result.rows);
  return result;
}

std::string sweep_csv(const WindowSweepResult& sweep) {
  std::string out = "window_s,success_rate,ci_low,ci_high,n_windows,mean_abs_err_bpm\n";
  for (const WindowSweepRow& r : sweep.rows) {
    out += format_number(r.window_s) + ',' + format_number(r.success_rate) + ',' + format_number(r.ci_low) + ',' +
           format_number(r.ci_high) + ',' + std::to_string(r.n_windows) + ',' + format_number(r.mean_abs_err) + '\n';
  }
  return out;
}

std::string sweep_json(const WindowSweepResult& sweep) {
  json doc = json::array();
  for (const WindowSweepRow& r : sweep.rows) {
    doc.push_back({{"window_s", r.window_s},
                   {"success_rate", r.success_rate},
                   {"ci_low", r.ci_low},
                   {"ci_high", r.ci_high},
                   {"n_windows", r.n_windows},
                   {"mean_abs_err_bpm", r.mean_abs_err}});
  }
  return doc.dump(2) + "\n";
}

std::string spectrum_csv(const Spectrum& spectrum) {
  std::string out = "frequency_hz,bpm,power\n";
  for (std::size_t j = 0; j < spectrum.power.size(); ++j) {
    out += format_number(spectrum.frequencies[j]) + ',' + format_number(60.0 * spectrum.frequencies[j]) + ',' +
           format_number(spectrum.power[j]) + '\n';
  }
  return out;
}

std::string matrix_csv(const CirMatrix& h) {
  std::string out = "t_s";
  for (std::size_t c = 0; c < h.cols(); ++c) out += ",tap" + std::to_string(c);
  out += '\n';
  for (std::size_t r = 0; r < h.rows(); ++r) {
    out += format_number(h.row_times()[r]);
    for (const double v : h.row(r)) out += ',' + format_number(v);
    out += '\n';
  }
  return out;
}

std::string weights_csv(std::span<const double> weights, const SamplingGeometry& g) {
  std::string out = "tap,depth_cm,weight\n";
  for (std::size_t m = 0; m < weights.size(); ++m) {
    out += std::to_string(m) + ',' + format_number(tap_to_depth(static_cast<double>(m), g)) + ',' +
           format_number(weights[m]) + '\n';
  }
  return out;
}

}  // namespace uwbrr
