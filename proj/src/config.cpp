#include "uwbrr/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace uwbrr {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  const char* key;
  std::function<void(PipelineConfig&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename Member>
Field double_field(const char* key, Member member) {
  return {key,
          [key, member](PipelineConfig& c, const std::string& v) { member(c) = parse_double(key, v); },
          [member](const PipelineConfig& c) { return format_double(member(c)); }};
}

template <typename Member>
Field int_field(const char* key, Member member) {
  return {key,
          [key, member](PipelineConfig& c, const std::string& v) {
            member(c) = static_cast<int>(parse_int(key, v));
          },
          [member](const PipelineConfig& c) {
            return std::to_string(member(c));
          }};
}

template <typename Member>
Field bool_field(const char* key, Member member) {
  return {key,
          [key, member](PipelineConfig& c, const std::string& v) { member(c) = parse_bool(key, v); },
          [member](const PipelineConfig& c) {
            return std::string(member(c) ? "true" : "false");
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      double_field("geometry.cir_tap_period_s", [](auto& c) -> auto& { return c.geometry.cir_tap_period_s; }),
      int_field("geometry.extraction_offset", [](auto& c) -> auto& { return c.geometry.extraction_offset; }),
      int_field("geometry.window_taps", [](auto& c) -> auto& { return c.geometry.window_taps; }),
      double_field("geometry.slow_time_rate_hz", [](auto& c) -> auto& { return c.geometry.slow_time_rate_hz; }),
      double_field("geometry.refractive_index_thorax", [](auto& c) -> auto& { return c.geometry.refractive_index_thorax; }),
      double_field("geometry.speed_in_thorax_cm_per_ns", [](auto& c) -> auto& { return c.geometry.speed_in_thorax_cm_per_ns; }),
      double_field("geometry.speed_in_air_cm_per_ns", [](auto& c) -> auto& { return c.geometry.speed_in_air_cm_per_ns; }),
      double_field("band.f_low_hz", [](auto& c) -> auto& { return c.band.f_low_hz; }),
      double_field("band.f_high_hz", [](auto& c) -> auto& { return c.band.f_high_hz; }),
      double_field("band.snr_band_width_bpm", [](auto& c) -> auto& { return c.band.snr_band_width_bpm; }),
      int_field("calibration.half_window", [](auto& c) -> auto& { return c.calibration.half_window; }),
      bool_field("calibration.before_magnitude", [](auto& c) -> auto& { return c.calibrate_before_magnitude; }),
      bool_field("alignment.enabled", [](auto& c) -> auto& { return c.alignment.enabled; }),
      int_field("alignment.search_radius", [](auto& c) -> auto& { return c.alignment.search_radius; }),
      bool_field("fusion.remove_mean", [](auto& c) -> auto& { return c.fusion.remove_mean; }),
      double_field("fusion.regularization", [](auto& c) -> auto& { return c.fusion.regularization; }),
      Field{"spectral.taper",
            [](PipelineConfig& c, const std::string& v) {
              if (v == "none") c.spectral.taper = Taper::none;
              else if (v == "hann") c.spectral.taper = Taper::hann;
              else throw Error("spectral.taper: expected none|hann, got '" + v + "'");
            },
            [](const PipelineConfig& c) {
              return std::string(c.spectral.taper == Taper::hann ? "hann" : "none");
            }},
      int_field("spectral.zero_pad", [](auto& c) -> auto& { return c.spectral.zero_pad; }),
      double_field("analysis.window_s", [](auto& c) -> auto& { return c.analysis.window_s; }),
      double_field("analysis.hop_fraction", [](auto& c) -> auto& { return c.analysis.hop_fraction; }),
      double_field("analysis.jitter_tolerance", [](auto& c) -> auto& { return c.analysis.jitter_tolerance; }),
      double_field("baseline.motion_threshold_g", [](auto& c) -> auto& { return c.baseline.motion_threshold_g; }),
      double_field("baseline.min_window_s", [](auto& c) -> auto& { return c.baseline.min_window_s; }),
  };
  return table;
}

}  // namespace

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(key + ": expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw Error(key + ": expected an integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw Error(key + ": expected true|false, got '" + value + "'");
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    out.push_back({trim(std::string_view(body).substr(0, eq)),
                   trim(std::string_view(body).substr(eq + 1)), line_no});
  }
  return out;
}

PipelineConfig apply_config(const KeyValues& kv, PipelineConfig base, KeyValues* unused) {
  for (const auto& entry : kv) {
    bool known = false;
    for (const auto& f : fields()) {
      if (entry.key == f.key) {
        f.set(base, entry.value);
        known = true;
        break;
      }
    }
    if (!known && unused != nullptr) {
      unused->push_back(entry);
    } else if (!known) {
      throw Error("config line " + std::to_string(entry.line) + ": unknown key '" + entry.key + "'");
    }
  }
  require_valid(base.geometry, base.calibration, base.band);
  if (base.alignment.search_radius < 0) throw Error("alignment.search_radius must be >= 0");
  if (base.spectral.zero_pad < 1) throw Error("spectral.zero_pad must be >= 1");
  if (!(base.analysis.hop_fraction > 0.0)) throw Error("analysis.hop_fraction must be > 0");
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return apply_config(parse_key_values(ss.str()));
}

std::string to_text(const PipelineConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(config) + "\n";
  return out;
}

}  // namespace uwbrr
