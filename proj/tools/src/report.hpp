#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"

namespace specprobe::cli {

/// Markdown report comparing fitted exponents with their theoretical values.
/// Artifacts absent from `dir` are listed as "not run".
std::string build_report(const std::filesystem::path& dir, const RunConfig& cfg);

void write_report(const std::filesystem::path& dir, const RunConfig& cfg);

}  // namespace specprobe::cli
