#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charpath/paths.hpp"

namespace charpath {

enum class OutputFormat { csv, json, svg };

struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path cache_dir;  // empty disables the dlog cache
  OutputFormat format = OutputFormat::csv;
  std::uint64_t terms = 10007;
  std::size_t grid = 2048;
  unsigned threads = 1;
};

/// Throws InvalidArgument when threads or terms is zero.
void validate(const RunConfig& config);

OutputFormat output_format_from_string(const std::string& name);
std::string to_string(OutputFormat format);

/// Flat `key = value` lines; `#` starts a comment; values may be quoted.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Overlay keys from a file onto `config`. Unknown keys are errors.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// CHARPATH_SEED and CHARPATH_CACHE_DIR.
void apply_environment(RunConfig& config);

/// "a/b" as an exact rational, anything else as a decimal.
TimePoint parse_time_point(const std::string& text);
std::vector<TimePoint> parse_time_list(const std::string& text);
std::vector<std::uint32_t> parse_index_list(const std::string& text);

/// "start:end:count", inclusive and linearly spaced.
std::vector<double> parse_tau_grid(const std::string& text);

std::uint64_t parse_u64(const std::string& text, const char* what);

}  // namespace charpath
