#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace specprobe::cli {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_numerical = 2, exit_io = 3 };

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"validate", "spectrum", "wkb", "gaps", "probe", "kernel", "report"};
    return names;
}

/// Runs one subcommand with a resolved configuration, mapping failures to exit codes.
int run(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point (argv[1] is the subcommand).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specprobe::cli
