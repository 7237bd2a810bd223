#include <doctest.h>

#include <cmath>

#include "uwbrr/eval.hpp"
#include "uwbrr/simulator.hpp"

using namespace uwbrr;

namespace {

EvalRow row(std::string activity, double est, double ref, double snr = 1.0) {
  EvalRow r;
  r.id = activity + std::to_string(est);
  r.activity = std::move(activity);
  r.method = "uwb";
  r.rr_est = est;
  r.rr_ref = ref;
  r.abs_err = std::abs(est - ref);
  r.snr = snr;
  return r;
}

const ActivityAggregate& find(const std::vector<ActivityAggregate>& aggs, const std::string& name) {
  for (const auto& a : aggs) {
    if (a.activity == name) return a;
  }
  throw std::runtime_error("missing aggregate " + name);
}

}  // namespace

TEST_CASE("metric definitions") {
  CHECK(rmse(std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(mape(std::vector<double>{15, 15}, std::vector<double>{15, 15}) == 0.0);
  CHECK(success_rate(std::vector<double>{0.0, 0.0}) == 1.0);

  CHECK(mape(std::vector<double>{11}, std::vector<double>{10}) == doctest::Approx(10.0));
  CHECK(success_rate(std::vector<double>{1.0}) == 0.0);
  CHECK(success_rate(std::vector<double>{std::nextafter(1.0, 0.0)}) == 1.0);

  CHECK(success_rate(std::vector<double>{0.5, 1.5}) == 0.5);
  CHECK(rmse(std::vector<double>{0.5, 1.5}) == doctest::Approx(std::sqrt((0.25 + 2.25) / 2.0)));
  CHECK(rmse(std::vector<double>{0.5, 1.5}) == doctest::Approx(1.118).epsilon(1e-3));
}

TEST_CASE("aggregates are recomputable from rows") {
  const std::vector<EvalRow> rows{row("sitting", 15, 15, 2.0), row("sitting", 16, 15, 1.0), row("walking", 12, 10, 0.5)};
  const auto aggs = aggregate(rows);
  REQUIRE(aggs.size() == 3);
  CHECK(aggs.back().activity == "all");
  const auto& sitting = find(aggs, "sitting");
  CHECK(sitting.n == 2);
  CHECK(sitting.rmse == doctest::Approx(std::sqrt(0.5)));
  CHECK(sitting.mape == doctest::Approx(100.0 / 15.0 / 2.0));
  CHECK(sitting.success_rate == 0.5);
  CHECK(sitting.mean_snr == doctest::Approx(1.5));
  const auto& all = find(aggs, "all");
  CHECK(all.n == 3);
  CHECK(all.rmse == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("infinite snr and suppressed rows") {
  std::vector<EvalRow> rows{row("a", 15, 15, INFINITY), row("a", 15, 15, 3.0), row("a", 16, 15, 1.0)};
  EvalRow s = row("a", 0, 15);
  s.suppressed = true;
  rows.push_back(s);
  const auto& agg = find(aggregate(rows), "a");
  CHECK(agg.n == 3);
  CHECK(agg.mean_snr == doctest::Approx(2.0));
}

TEST_CASE("batch merge preserves aggregates") {
  const std::vector<EvalRow> rows{row("x", 15, 15), row("x", 17, 15), row("y", 9, 10), row("y", 9.5, 10),
                                  row("z", 30, 28)};
  EvalResult whole;
  whole.rows = rows;
  whole.aggregates = aggregate(rows);
  EvalResult a;
  a.rows = {rows[3], rows[0]};
  a.aggregates = aggregate(a.rows);
  EvalResult b;
  b.rows = {rows[4], rows[1], rows[2]};
  b.aggregates = aggregate(b.rows);
  const EvalResult merged = merge(a, b);
  REQUIRE(merged.aggregates.size() == whole.aggregates.size());
  for (std::size_t i = 0; i < whole.aggregates.size(); ++i) {
    CHECK(merged.aggregates[i].activity == whole.aggregates[i].activity);
    CHECK(merged.aggregates[i].n == whole.aggregates[i].n);
    CHECK(merged.aggregates[i].rmse == doctest::Approx(whole.aggregates[i].rmse).epsilon(1e-14));
    CHECK(merged.aggregates[i].mape == doctest::Approx(whole.aggregates[i].mape).epsilon(1e-14));
    CHECK(merged.aggregates[i].success_rate == whole.aggregates[i].success_rate);
  }
  const EvalResult reversed = merge(b, a);
  CHECK(reversed.aggregates.back().rmse == doctest::Approx(merged.aggregates.back().rmse).epsilon(1e-14));
}

TEST_CASE("pearson") {
  CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 4, 6, 8}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 1}), Error);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{2, 1}), Error);

  EvalResult r;
  r.rows = {row("a", 18, 15, 1.0), row("a", 17, 15, 2.0), row("a", 16, 15, 3.0), row("a", 15, 15, INFINITY)};
  CHECK(snr_error_correlation(r) == doctest::Approx(-1.0));
  r.rows = {row("a", 16, 15, 1.0), row("a", 16, 15, 2.0), row("a", 16, 15, 3.0)};
  CHECK_THROWS_AS(snr_error_correlation(r), Error);
}

TEST_CASE("proportion intervals") {
  for (std::size_t n : {1u, 3u, 9u, 10u, 25u, 400u}) {
    for (std::size_t k = 0; k <= n; ++k) {
      const auto ci = proportion_ci(k, n);
      const double p = static_cast<double>(k) / n;
      REQUIRE(ci.low >= 0.0);
      REQUIRE(ci.low <= p);
      REQUIRE(p <= ci.high);
      REQUIRE(ci.high <= 1.0);
    }
  }
  const auto normal = proportion_ci(50, 100);
  CHECK(normal.low == doctest::Approx(0.5 - 1.959964 * 0.05).epsilon(1e-6));
  const auto wilson = proportion_ci(0, 5);
  CHECK(wilson.low == 0.0);
  CHECK(wilson.high > 0.3);
}

TEST_CASE("evaluate: synthetic traces and exclusions") {
  SimScenario s;
  s.duration_s = 60.0;
  s.noise_std = 0.005;
  std::vector<TraceRecord> traces;
  for (std::uint64_t seed = 0; seed < 3; ++seed) traces.push_back(simulate(s, SamplingGeometry{}, seed));
  TraceRecord orphan = traces[0];
  orphan.truth.reset();
  orphan.reference.clear();
  orphan.reference_kind = ReferenceKind::none;
  traces.push_back(orphan);
  TraceRecord tiny = traces[1];
  tiny.cir.resize(3);
  traces.push_back(tiny);

  const EvalResult r = evaluate(traces, Method::uwb, PipelineConfig{});
  CHECK(r.rows.size() == 3);
  CHECK(r.excluded_no_reference == 1);
  CHECK(r.failed == 1);
  for (const EvalRow& row : r.rows) {
    CHECK(row.rr_ref == 15.0);
    CHECK(row.abs_err < 1.0);
  }
  const EvalResult again = evaluate(traces, Method::uwb, PipelineConfig{});
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(again.rows[i].rr_est == r.rows[i].rr_est);
    CHECK(again.rows[i].snr == r.rows[i].snr);
  }
}

TEST_CASE("evaluate: recorded-style trace uses the reference stream") {
  SimScenario s;
  s.duration_s = 60.0;
  s.rr_bpm = 12.0;
  TraceRecord t = simulate(s, SamplingGeometry{}, 5);
  t.truth.reset();
  const EvalResult r = evaluate(std::vector<TraceRecord>{t}, Method::rahman, PipelineConfig{});
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].rr_ref == doctest::Approx(12.0));
  CHECK(r.rows[0].method == "rahman");
}

TEST_CASE("window sweep on a clean trace follows bin quantization") {
  SimScenario s;
  const TraceRecord trace = simulate(s, SamplingGeometry{}, 1);
  std::vector<double> grid{2.0};
  for (double w = 20.0; w <= 119.0; w += 3.0) grid.push_back(w);
  const auto sweep = window_sweep(trace, grid, 0.10, Method::uwb, PipelineConfig{});
  REQUIRE(sweep.rows.size() == grid.size());

  CHECK(sweep.rows[0].window_s == 2.0);
  CHECK(sweep.rows[0].n_windows > 0);
  CHECK(sweep.rows[0].success_rate == 0.0);

  for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
    const auto& r = sweep.rows[i];
    CAPTURE(r.window_s);
    // Nearest DFT bin to 0.25 Hz at this window length.
    const double bins = 0.25 * r.window_s;
    const double nearest = std::abs(bins - std::floor(bins) - 0.5) < 1e-9 ? std::floor(bins) : std::round(bins);
    const double expected_err = 60.0 * std::abs(nearest / r.window_s - 0.25);
    CHECK(r.mean_abs_err == doctest::Approx(expected_err).epsilon(1e-9));
    CHECK(r.success_rate == (expected_err < 1.0 ? 1.0 : 0.0));
    CHECK(r.ci_low <= r.success_rate);
    CHECK(r.ci_high >= r.success_rate);
  }
}

TEST_CASE("default sweep grid") {
  const auto grid = default_sweep_grid();
  CHECK(grid.size() == 40);
  CHECK(grid.front() == 2.0);
  CHECK(grid.back() == 119.0);
}
