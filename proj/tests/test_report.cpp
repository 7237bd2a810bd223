#include <doctest.h>

#include <json.hpp>
#include <omp.h>

#include "uwbrr/report.hpp"
#include "uwbrr/simulator.hpp"
#include "uwbrr/spectral.hpp"

using namespace uwbrr;

namespace {

TraceRecord short_trace(std::uint64_t seed, double noise = 0.01) {
  SimScenario s;
  s.duration_s = 45.0;
  s.noise_std = noise;
  return simulate(s, SamplingGeometry{}, seed);
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_CASE("process_trace covers every analysis window") {
  PipelineConfig cfg;
  cfg.analysis.window_s = 20.0;
  const auto rows = process_trace(short_trace(1), Method::uwb, cfg);
  REQUIRE(rows.size() == 13);
  CHECK(rows[1].t0 == doctest::Approx(2.0));
  for (const auto& r : rows) {
    CHECK(r.status == "ok");
    REQUIRE(r.rr_bpm.has_value());
    CHECK(*r.rr_bpm == 15.0);
    CHECK(r.rayleigh.has_value());
    CHECK(r.ref_bpm.value() == 15.0);
  }
}

TEST_CASE("process_trace reports estimator errors per window") {
  PipelineConfig cfg;
  cfg.analysis.window_s = 1.0;
  const auto rows = process_trace(short_trace(2), Method::uwb, cfg);
  REQUIRE_FALSE(rows.empty());
  CHECK(rows[0].status == "error: band unresolvable at this window length");
  CHECK_FALSE(rows[0].rr_bpm.has_value());
}

TEST_CASE("process_trace output is independent of the thread count") {
  PipelineConfig cfg;
  cfg.analysis.window_s = 20.0;
  const TraceRecord trace = short_trace(3, 0.03);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const std::string one = windows_csv(process_trace(trace, Method::uwb, cfg));
  omp_set_num_threads(3);
  const std::string three = windows_csv(process_trace(trace, Method::uwb, cfg));
  omp_set_num_threads(saved);
  CHECK(one == three);
}

TEST_CASE("csv headers") {
  CHECK(first_line(windows_csv({})) ==
        "window,t_start_s,t_end_s,method,rr_bpm,snr,peak_hz,rayleigh,ref_bpm,abs_err_bpm,status");
  CHECK(first_line(eval_rows_csv({})) == "id,activity,method,rr_est_bpm,rr_ref_bpm,abs_err_bpm,snr,suppressed");
  CHECK(first_line(eval_aggregates_csv({})) == "activity,n,rmse_bpm,mape_pct,success_rate,mean_snr");
  CHECK(first_line(sweep_csv({})) == "window_s,success_rate,ci_low,ci_high,n_windows,mean_abs_err_bpm");
  CHECK(first_line(spectrum_csv({})) == "frequency_hz,bpm,power");
}

TEST_CASE("numbers and sentinels") {
  CHECK(format_number(15.0) == "15");
  CHECK(format_number(0.125) == "0.125");
  CHECK(format_number(INFINITY) == "inf");
}

TEST_CASE("eval rows round-trip through csv") {
  EvalResult r;
  EvalRow a{"t1", "sitting", "uwb", 15.5, 15.0, 0.5, INFINITY, false};
  EvalRow b{"t2", "walking", "bates", 0.0, 14.0, 0.0, 0.0, true};
  EvalRow c{"t3", "sitting", "uwb", 13.0, 15.0, 2.0, 0.75, false};
  r.rows = {a, b, c};
  r.aggregates = aggregate(r.rows);
  const EvalResult back = parse_eval_rows_csv(eval_rows_csv(r));
  REQUIRE(back.rows.size() == 3);
  CHECK(back.rows[0].snr == INFINITY);
  CHECK(back.rows[1].suppressed);
  CHECK(back.rows[2].abs_err == 2.0);
  CHECK(eval_aggregates_csv(back) == eval_aggregates_csv(r));
  CHECK_THROWS_AS(parse_eval_rows_csv("id,activity\nx,y\n"), Error);
}

TEST_CASE("json mirrors") {
  PipelineConfig cfg;
  cfg.analysis.window_s = 40.0;
  const auto rows = process_trace(short_trace(4), Method::uwb, cfg);
  IngestReport ingest;
  ingest.frames_read = 1440;
  ingest.gaps = {{1.0, 2.0}};
  const auto doc = nlohmann::json::parse(windows_json(rows, ingest));
  CHECK(doc["ingest"]["frames_read"] == 1440);
  CHECK(doc["ingest"]["gaps"][0]["end_s"] == 2.0);
  REQUIRE(doc["windows"].size() == rows.size());
  CHECK(doc["windows"][0]["rr_bpm"].get<double>() == *rows[0].rr_bpm);

  EvalResult r;
  r.rows = {EvalRow{"t", "a", "uwb", 15, 15, 0, INFINITY, false}};
  r.aggregates = aggregate(r.rows);
  const auto eval = nlohmann::json::parse(eval_json(r));
  CHECK(eval["rows"][0]["snr"] == "inf");
  CHECK(eval["aggregates"].back()["activity"] == "all");
}

TEST_CASE("weights and spectrum csv") {
  const std::string w = weights_csv(std::vector<double>{0.5, -0.5}, SamplingGeometry{});
  CHECK(w == "tap,depth_cm,weight\n0,0,0.5\n1," + format_number(tap_to_depth(1, SamplingGeometry{})) + ",-0.5\n");
  const Spectrum s = periodogram(std::vector<double>{0, 1, 0, -1}, 4.0);
  const std::string csv = spectrum_csv(s);
  CHECK(csv.find("\n1,60,4\n") != std::string::npos);
}
