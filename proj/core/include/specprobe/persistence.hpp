#pragma once

#include <filesystem>
#include <optional>

#include "specprobe/eigensolve.hpp"

namespace specprobe {

inline constexpr int spectrum_format_version = 1;

/// Writes `path` (JSON header) and `path` + ".samples.bin" (raw samples).
void save_spectrum(const SpectrumTable& table, const std::filesystem::path& path);

/// Loads a saved table. Returns nullopt when the file is absent or was written
/// for a different model, channel, format version or tolerance set.
std::optional<SpectrumTable> load_spectrum(const std::filesystem::path& path, const Channel& channel,
                                           const PotentialModel& model, const SolverOptions& tolerances);

/// Cached solve: reuses `path` if it holds exactly levels 0..l_max with matching
/// settings, otherwise solves and rewrites it.
SpectrumTable load_or_solve(const std::filesystem::path& path, const Channel& channel,
                            const PotentialModel& model, int l_max, const SolverOptions& opts = {});

}  // namespace specprobe
