#include "uwbrr/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace uwbrr {

namespace {

constexpr std::string_view kMagic = "UWBRR-TRACE";
constexpr int kFormatVersion = 1;

enum class Section { header, cir, accel, ref };

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error("trace line " + std::to_string(line) + ": " + what);
}

// Splits a comma-separated record into numeric fields.
class FieldReader {
 public:
  FieldReader(std::string_view body, int line) : rest_(body), line_(line) {}

  template <typename T>
  T next(const char* what) {
    if (done_) fail(line_, std::string("missing field '") + what + "'");
    const auto comma = rest_.find(',');
    const std::string_view tok = trim(rest_.substr(0, comma));
    if (comma == std::string_view::npos) {
      done_ = true;
    } else {
      rest_.remove_prefix(comma + 1);
    }
    T v{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      fail(line_, std::string("malformed ") + what + " '" + std::string(tok) + "'");
    }
    return v;
  }

  bool done() const { return done_; }

  std::size_t remaining_fields() const {
    if (done_) return 0;
    return static_cast<std::size_t>(std::count(rest_.begin(), rest_.end(), ',')) + 1;
  }

 private:
  std::string_view rest_;
  int line_;
  bool done_ = false;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::spirometer: return "spirometer";
    case ReferenceKind::belt: return "belt";
    case ReferenceKind::none: return "none";
  }
  return "none";
}

ReferenceKind reference_kind_from_string(const std::string& s) {
  if (s == "spirometer") return ReferenceKind::spirometer;
  if (s == "belt") return ReferenceKind::belt;
  if (s == "none") return ReferenceKind::none;
  throw Error("unknown reference kind '" + s + "'");
}

ParsedTrace parse_trace_text(const std::string& text, const SamplingGeometry& g,
                             double jitter_tolerance) {
  ParsedTrace out;
  TraceRecord& trace = out.trace;
  IngestReport& report = out.report;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  Section section = Section::header;
  bool saw_magic = false;
  std::optional<double> declared_duration;
  std::optional<double> truth_rr;
  double truth_drift = 0.0;
  const std::size_t taps = static_cast<std::size_t>(g.window_taps);

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (!saw_magic) {
      if (line.substr(0, kMagic.size()) != kMagic) fail(line_no, "missing UWBRR-TRACE header");
      const std::string_view version = trim(line.substr(kMagic.size()));
      if (version != std::to_string(kFormatVersion)) {
        fail(line_no, "unsupported trace format version '" + std::string(version) + "'");
      }
      saw_magic = true;
      continue;
    }
    if (line == "CIR") { section = Section::cir; continue; }
    if (line == "ACCEL") { section = Section::accel; continue; }
    if (line == "REF") { section = Section::ref; continue; }

    switch (section) {
      case Section::header: {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value' in header");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        try {
          if (key == "id") trace.id = value;
          else if (key == "activity") trace.activity_label = value;
          else if (key == "reference_kind") trace.reference_kind = reference_kind_from_string(value);
          else if (key == "duration") declared_duration = std::stod(value);
          else if (key == "truth_rr_bpm") truth_rr = std::stod(value);
          else if (key == "truth_drift_bpm_per_min") truth_drift = std::stod(value);
          else fail(line_no, "unknown header key '" + key + "'");
        } catch (const std::invalid_argument&) {
          fail(line_no, "malformed value for '" + key + "'");
        } catch (const Error& e) {
          if (std::string_view(e.what()).starts_with("trace line")) throw;
          fail(line_no, e.what());
        }
        break;
      }
      case Section::cir: {
        FieldReader fields(line, line_no);
        CirFrame frame;
        frame.counter = fields.next<std::uint64_t>("counter");
        frame.timestamp = fields.next<double>("timestamp");
        const std::size_t values = fields.remaining_fields();
        if (values != 2 * taps) {
          fail(line_no, "tap count mismatch: expected " + std::to_string(taps) + " taps, found " +
                            (values % 2 == 0 ? std::to_string(values / 2)
                                             : std::to_string(values) + " values (odd)"));
        }
        frame.taps.resize(taps);
        for (std::size_t m = 0; m < taps; ++m) {
          const auto re = fields.next<long long>("tap real part");
          const auto im = fields.next<long long>("tap imaginary part");
          frame.taps[m] = Complex(static_cast<double>(re), static_cast<double>(im));
        }
        ++report.frames_read;
        if (!trace.cir.empty() && frame.counter <= trace.cir.back().counter) {
          ++report.duplicates_dropped;
          break;
        }
        trace.cir.push_back(std::move(frame));
        break;
      }
      case Section::accel: {
        FieldReader fields(line, line_no);
        AccelSample s;
        s.t = fields.next<double>("time");
        s.ax = fields.next<double>("ax");
        s.ay = fields.next<double>("ay");
        s.az = fields.next<double>("az");
        if (!fields.done()) fail(line_no, "trailing fields in ACCEL record");
        if (!trace.accel.empty() && s.t < trace.accel.back().t) fail(line_no, "ACCEL not time-sorted");
        trace.accel.push_back(s);
        break;
      }
      case Section::ref: {
        FieldReader fields(line, line_no);
        TimedValue v;
        v.t = fields.next<double>("time");
        v.value = fields.next<double>("value");
        if (!fields.done()) fail(line_no, "trailing fields in REF record");
        if (!trace.reference.empty() && v.t < trace.reference.back().t) fail(line_no, "REF not time-sorted");
        trace.reference.push_back(v);
        break;
      }
    }
  }

  if (!saw_magic) throw Error("trace: empty input");
  if (trace.cir.empty()) throw Error("trace: no frames");

  const double period = 1.0 / g.slow_time_rate_hz;
  for (std::size_t i = 1; i < trace.cir.size(); ++i) {
    const CirFrame& prev = trace.cir[i - 1];
    const CirFrame& next = trace.cir[i];
    if (next.timestamp < prev.timestamp) throw Error("trace: CIR timestamps decrease after counter " + std::to_string(prev.counter));
    const auto step = next.counter - prev.counter;
    const double dt = next.timestamp - prev.timestamp;
    if (step > 1) {
      report.gaps.push_back({prev.timestamp + period, next.timestamp});
    } else if (std::abs(dt - period) > jitter_tolerance * period) {
      report.gaps.push_back({prev.timestamp, next.timestamp});
    }
  }
  const CirFrame& first = trace.cir.front();
  const CirFrame& last = trace.cir.back();
  report.clock_skew_estimate =
      (last.timestamp - first.timestamp) - static_cast<double>(last.counter - first.counter) * period;

  double span = last.timestamp - first.timestamp;
  if (!trace.accel.empty()) span = std::max(span, trace.accel.back().t - trace.accel.front().t);
  if (!trace.reference.empty()) span = std::max(span, trace.reference.back().t - trace.reference.front().t);
  trace.duration = std::max(declared_duration.value_or(0.0), span);
  if (truth_rr) trace.truth = GroundTruth{*truth_rr, truth_drift};
  return out;
}

ParsedTrace parse_trace(const std::filesystem::path& path, const SamplingGeometry& g,
                        double jitter_tolerance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open trace file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace_text(ss.str(), g, jitter_tolerance);
}

std::string write_trace_text(const TraceRecord& trace) {
  std::string out;
  out.reserve(trace.cir.size() * (trace.cir.empty() ? 0 : trace.cir.front().taps.size()) * 12 + 4096);
  out += std::string(kMagic) + " " + std::to_string(kFormatVersion) + "\n";
  out += "id = " + trace.id + "\n";
  out += "activity = " + trace.activity_label + "\n";
  out += "reference_kind = " + to_string(trace.reference_kind) + "\n";
  out += "duration = " + fmt(trace.duration) + "\n";
  if (trace.truth) {
    out += "truth_rr_bpm = " + fmt(trace.truth->rr_bpm) + "\n";
    out += "truth_drift_bpm_per_min = " + fmt(trace.truth->drift_bpm_per_min) + "\n";
  }
  out += "CIR\n";
  for (const CirFrame& f : trace.cir) {
    out += std::to_string(f.counter);
    out += ',';
    out += fmt(f.timestamp);
    for (const Complex& tap : f.taps) {
      out += ',';
      out += std::to_string(std::llround(tap.real()));
      out += ',';
      out += std::to_string(std::llround(tap.imag()));
    }
    out += '\n';
  }
  out += "ACCEL\n";
  for (const AccelSample& s : trace.accel) {
    out += fmt(s.t) + ',' + fmt(s.ax) + ',' + fmt(s.ay) + ',' + fmt(s.az) + '\n';
  }
  out += "REF\n";
  for (const TimedValue& v : trace.reference) out += fmt(v.t) + ',' + fmt(v.value) + '\n';
  return out;
}

void write_trace(const TraceRecord& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write trace file " + path.string());
  out << write_trace_text(trace);
}

std::vector<TimedValue> resample_reference(const std::vector<TimedValue>& reference, double target_rate) {
  if (reference.size() < 2) throw Error("resample_reference: need at least two samples");
  if (!(target_rate > 0.0)) throw Error("resample_reference: target rate must be > 0");
  const double t0 = reference.front().t;
  const double t_end = reference.back().t;
  if (!(t_end > t0)) throw Error("resample_reference: reference spans zero time");

  const auto count = static_cast<std::size_t>(std::floor((t_end - t0) * target_rate + 1e-9)) + 1;
  std::vector<TimedValue> out;
  out.reserve(count);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = std::min(t0 + static_cast<double>(k) / target_rate, t_end);
    while (seg + 2 < reference.size() && reference[seg + 1].t < t) ++seg;
    const TimedValue& a = reference[seg];
    const TimedValue& b = reference[seg + 1];
    const double span = b.t - a.t;
    const double u = span > 0.0 ? std::clamp((t - a.t) / span, 0.0, 1.0) : 0.0;
    out.push_back({t, a.value + u * (b.value - a.value)});
  }
  return out;
}

}  // namespace uwbrr
