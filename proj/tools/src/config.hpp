#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "specprobe/eigensolve.hpp"
#include "specprobe/potential.hpp"

namespace specprobe::cli {

struct Range {
    double a = 0;
    double b = 0;
    double step = 1;
};

struct RunConfig {
    std::string model = "1*r^4";
    bool allow_harmonic = false;
    int d = 3;
    std::vector<int> n = {0};
    int lmax = 60;
    double ppw = 200;
    double rel_tol = 1e-13;
    unsigned threads = 0;
    bool cache = true;

    int l_first = 20;
    int l_last = 50;
    double sigma = 1.0;
    double phi_center = 1.0;
    double phi_halfwidth = 0.2;
    double psi_center = 1.5;
    double psi_halfwidth = 0.2;

    std::string fit_window = "auto";  ///< "auto" (top half) or "first:last" index window
    std::vector<double> ladder = {100, 200, 400, 800, 1600};
    double epsilon = 0.1;

    Range t{0, 1, 0.5};
    Range r{0.5, 1.5, 0.25};
    Range s{0.5, 1.5, 0.25};
    int L = 20;

    std::string out = ".";

    PotentialModel potential() const;
    SolverOptions solver() const;
};

/// One configurable value: addressed as [section] key in config files and as a flag on the command line.
struct ConfigKey {
    std::string section;
    std::string key;
    std::string flag;
    std::string help;
    bool is_flag = false;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<nlohmann::json(const RunConfig&)> get;
};

const std::vector<ConfigKey>& config_keys();

/// Parses flat `key = value` text with `[section]` headers; '#' and ';' start comments.
std::map<std::string, std::string> parse_ini(const std::string& text);

/// Applies "section.key" entries; unknown keys are an ArgumentError.
void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& settings);

void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Range "a:b:step" and level window "a:b".
Range parse_range(const std::string& text);
std::pair<int, int> parse_level_range(const std::string& text);

/// Checks everything that can be checked before computing; throws ArgumentError.
void validate_config(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace specprobe::cli
