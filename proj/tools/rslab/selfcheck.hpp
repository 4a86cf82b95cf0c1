#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rslab::cli {

struct SelfcheckOptions {
  bool fast = false;
  /// Negative control: "wtdist" corrupts the closed-form weight distribution.
  std::string mutate;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

struct CheckRow {
  std::string module;
  std::string check;
  bool pass = false;
  std::string detail;
};

/// Every row's detail depends only on the options' seed and mode, never on
/// timing or the worker count.
std::vector<CheckRow> run_selfcheck(const SelfcheckOptions& options);

}  // namespace rslab::cli
