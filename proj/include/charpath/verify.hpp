#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace charpath {

/// One line of a verification table: `value` is compared against `bound`.
struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
};

std::vector<Check> verify_orthogonality(const SuiteOptions& opts = {});
std::vector<Check> verify_gauss(const SuiteOptions& opts = {});
std::vector<Check> verify_divisor(const SuiteOptions& opts = {});
std::vector<Check> verify_deligne(const SuiteOptions& opts = {});
/// Median rough-part norm over 50 seeds, decreasing in the smoothness bound.
std::vector<Check> verify_tail(const SuiteOptions& opts = {});
std::vector<Check> verify_ramanujan(const SuiteOptions& opts = {});

/// Dispatch by suite name; throws InvalidArgument for unknown names.
std::vector<Check> run_suite(const std::string& name, const SuiteOptions& opts = {});
std::vector<std::string> suite_names();

bool all_pass(const std::vector<Check>& checks);
std::string format_table(const std::vector<Check>& checks);

}  // namespace charpath
