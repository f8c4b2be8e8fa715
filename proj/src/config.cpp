#include "charpath/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "charpath/errors.hpp"

namespace charpath {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const char* what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw InvalidArgument(fmt::format("invalid {}: '{}'", what, text));
  return v;
}

}  // namespace

std::uint64_t parse_u64(const std::string& text, const char* what) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw InvalidArgument(fmt::format("invalid {}: '{}'", what, text));
  return v;
}

void validate(const RunConfig& config) {
  if (config.threads < 1) throw InvalidArgument("thread count must be at least 1");
  if (config.terms < 1) throw InvalidArgument("truncation N must be at least 1");
  if (config.grid < 2) throw InvalidArgument("grid size must be at least 2");
}

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "svg") return OutputFormat::svg;
  throw InvalidArgument(fmt::format("unknown output format '{}'", name));
}

std::string to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::svg: return "svg";
  }
  return "csv";
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument(fmt::format("config line {}: expected key = value", lineno));
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw InvalidArgument(fmt::format("config line {}: empty key", lineno));
    out[key] = value;
  }
  return out;
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read config file " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  for (const auto& [key, value] : parse_config_text(buf.str())) {
    if (key == "seed")
      config.seed = parse_u64(value, "seed");
    else if (key == "cache_dir")
      config.cache_dir = value;
    else if (key == "format")
      config.format = output_format_from_string(value);
    else if (key == "terms" || key == "truncation")
      config.terms = parse_u64(value, key.c_str());
    else if (key == "grid")
      config.grid = parse_u64(value, "grid");
    else if (key == "threads")
      config.threads = static_cast<unsigned>(parse_u64(value, "threads"));
    else
      throw InvalidArgument(fmt::format("unknown config key '{}'", key));
  }
}

void apply_environment(RunConfig& config) {
  if (const char* s = std::getenv("CHARPATH_SEED"); s && *s) config.seed = parse_u64(s, "CHARPATH_SEED");
  if (const char* d = std::getenv("CHARPATH_CACHE_DIR"); d && *d) config.cache_dir = d;
}

TimePoint parse_time_point(const std::string& text) {
  const std::string t = trim(text);
  if (const auto slash = t.find('/'); slash != std::string::npos) {
    const auto num = parse_u64(t.substr(0, slash), "time numerator");
    const auto den = parse_u64(t.substr(slash + 1), "time denominator");
    if (den == 0) throw InvalidArgument("time denominator must be positive");
    if (num > den) throw InvalidArgument(fmt::format("time {} outside [0, 1]", t));
    return Fraction{num, den};
  }
  const double v = parse_double(t, "time");
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument(fmt::format("time {} outside [0, 1]", t));
  return v;
}

std::vector<TimePoint> parse_time_list(const std::string& text) {
  std::vector<TimePoint> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_time_point(part));
  if (out.empty()) throw InvalidArgument("empty time list");
  return out;
}

std::vector<std::uint32_t> parse_index_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (const auto& part : split(text, ',')) {
    const auto v = parse_u64(part, "exponent");
    if (v > 64) throw InvalidArgument("exponent too large");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  if (out.empty()) throw InvalidArgument("empty exponent list");
  return out;
}

std::vector<double> parse_tau_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InvalidArgument("tau grid must look like start:end:count");
  const double a = parse_double(parts[0], "tau start");
  const double b = parse_double(parts[1], "tau end");
  const auto count = parse_u64(parts[2], "tau count");
  if (count < 1) throw InvalidArgument("tau count must be positive");
  if (count == 1) {
    if (a != b) throw InvalidArgument("a single tau needs start == end");
    return {a};
  }
  if (!(b > a)) throw InvalidArgument("tau end must exceed start");
  std::vector<double> out(count);
  for (std::uint64_t i = 0; i < count; ++i)
    out[i] = i + 1 == count ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

}  // namespace charpath
