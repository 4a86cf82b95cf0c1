#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace rslab::cli {

/// Probabilities and other reals that are reported, 6 significant digits.
std::string fmt_prob(double x);
/// Log-space values and reals that feed later computation, 10 significant digits.
std::string fmt_real(double x);
std::string fmt_seed(std::uint64_t seed);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rslab::cli
