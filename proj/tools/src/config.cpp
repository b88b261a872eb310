#include "config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "specprobe/errors.hpp"

namespace specprobe::cli {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

double to_real(const std::string& s) {
    const std::string t = trim(s);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0') throw ArgumentError("not a number: '" + s + "'");
    return v;
}

int to_int(const std::string& s) {
    const double v = to_real(s);
    if (v != static_cast<int>(v)) throw ArgumentError("not an integer: '" + s + "'");
    return static_cast<int>(v);
}

bool to_bool(const std::string& s) {
    std::string t = trim(s);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ArgumentError("not a boolean: '" + s + "'");
}

nlohmann::json range_json(const Range& r) { return {r.a, r.b, r.step}; }

std::vector<ConfigKey> make_keys() {
    std::vector<ConfigKey> k;
    auto add = [&](std::string section, std::string key, std::string flag, std::string help, auto set, auto get,
                   bool is_flag = false) {
        k.push_back({std::move(section), std::move(key), std::move(flag), std::move(help), is_flag, set, get});
    };
    using J = nlohmann::json;
    add("model", "spec", "--model", "potential terms, e.g. \"1*r^4+0.5*r^6\"",
        [](RunConfig& c, const std::string& v) { c.model = trim(v); }, [](const RunConfig& c) { return J(c.model); });
    add("model", "allow_harmonic", "--allow-harmonic", "accept an r^2 term (calibration runs)",
        [](RunConfig& c, const std::string& v) { c.allow_harmonic = to_bool(v); },
        [](const RunConfig& c) { return J(c.allow_harmonic); }, true);
    add("channel", "d", "--d", "space dimension (>= 3)",
        [](RunConfig& c, const std::string& v) { c.d = to_int(v); }, [](const RunConfig& c) { return J(c.d); });
    add("channel", "n", "--n", "spherical-harmonic degrees, comma separated",
        [](RunConfig& c, const std::string& v) {
            c.n.clear();
            for (const auto& p : split(v, ',')) c.n.push_back(to_int(p));
        },
        [](const RunConfig& c) { return J(c.n); });
    add("solver", "lmax", "--lmax", "highest level to solve",
        [](RunConfig& c, const std::string& v) { c.lmax = to_int(v); }, [](const RunConfig& c) { return J(c.lmax); });
    add("solver", "ppw", "--ppw", "grid points per local wavelength at the top energy",
        [](RunConfig& c, const std::string& v) { c.ppw = to_real(v); }, [](const RunConfig& c) { return J(c.ppw); });
    add("solver", "rel_tol", "--rel-tol", "eigenvalue refinement tolerance",
        [](RunConfig& c, const std::string& v) { c.rel_tol = to_real(v); },
        [](const RunConfig& c) { return J(c.rel_tol); });
    add("solver", "threads", "--threads", "worker threads (0 = all cores)",
        [](RunConfig& c, const std::string& v) { c.threads = static_cast<unsigned>(std::max(0, to_int(v))); },
        [](const RunConfig& c) { return J(c.threads); });
    add("solver", "cache", "--cache", "reuse saved spectra in the output directory (true/false)",
        [](RunConfig& c, const std::string& v) { c.cache = to_bool(v); }, [](const RunConfig& c) { return J(c.cache); });
    add("probe", "lrange", "--lrange", "probed levels a:b",
        [](RunConfig& c, const std::string& v) { std::tie(c.l_first, c.l_last) = parse_level_range(v); },
        [](const RunConfig& c) { return J(std::to_string(c.l_first) + ":" + std::to_string(c.l_last)); });
    add("probe", "sigma", "--sigma", "gaussian window scale",
        [](RunConfig& c, const std::string& v) { c.sigma = to_real(v); }, [](const RunConfig& c) { return J(c.sigma); });
    add("probe", "phi_center", "--phi-center", "centre of the first bump",
        [](RunConfig& c, const std::string& v) { c.phi_center = to_real(v); },
        [](const RunConfig& c) { return J(c.phi_center); });
    add("probe", "phi_halfwidth", "--phi-halfwidth", "halfwidth of the first bump",
        [](RunConfig& c, const std::string& v) { c.phi_halfwidth = to_real(v); },
        [](const RunConfig& c) { return J(c.phi_halfwidth); });
    add("probe", "psi_center", "--psi-center", "centre of the second bump",
        [](RunConfig& c, const std::string& v) { c.psi_center = to_real(v); },
        [](const RunConfig& c) { return J(c.psi_center); });
    add("probe", "psi_halfwidth", "--psi-halfwidth", "halfwidth of the second bump",
        [](RunConfig& c, const std::string& v) { c.psi_halfwidth = to_real(v); },
        [](const RunConfig& c) { return J(c.psi_halfwidth); });
    add("fit", "window", "--fit-window", "index window a:b for gap/amplitude fits, or auto (top half)",
        [](RunConfig& c, const std::string& v) {
            const auto t = trim(v);
            if (t != "auto") parse_level_range(t);
            c.fit_window = t;
        },
        [](const RunConfig& c) { return J(c.fit_window); });
    add("wkb", "ladder", "--ladder", "energies for the turning-point error integral, comma separated",
        [](RunConfig& c, const std::string& v) {
            c.ladder.clear();
            for (const auto& p : split(v, ',')) c.ladder.push_back(to_real(p));
        },
        [](const RunConfig& c) { return J(c.ladder); });
    add("wkb", "epsilon", "--epsilon", "relative split around the turning point",
        [](RunConfig& c, const std::string& v) { c.epsilon = to_real(v); },
        [](const RunConfig& c) { return J(c.epsilon); });
    add("kernel", "t", "--t", "time samples a:b:step",
        [](RunConfig& c, const std::string& v) { c.t = parse_range(v); }, [](const RunConfig& c) { return range_json(c.t); });
    add("kernel", "r", "--r", "radial samples a:b:step",
        [](RunConfig& c, const std::string& v) { c.r = parse_range(v); }, [](const RunConfig& c) { return range_json(c.r); });
    add("kernel", "s", "--s", "radial samples a:b:step",
        [](RunConfig& c, const std::string& v) { c.s = parse_range(v); }, [](const RunConfig& c) { return range_json(c.s); });
    add("kernel", "L", "--L", "kernel truncation level",
        [](RunConfig& c, const std::string& v) { c.L = to_int(v); }, [](const RunConfig& c) { return J(c.L); });
    add("output", "dir", "--out", "output directory (default: $SPECPROBE_OUT or .)",
        [](RunConfig& c, const std::string& v) { c.out = trim(v); }, [](const RunConfig& c) { return J(c.out); });
    return k;
}

}  // namespace

PotentialModel RunConfig::potential() const { return PotentialModel::parse(model, allow_harmonic); }

SolverOptions RunConfig::solver() const {
    SolverOptions o;
    o.grid.points_per_wavelength = ppw;
    o.rel_tol = rel_tol;
    o.threads = threads;
    return o;
}

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = make_keys();
    return keys;
}

std::map<std::string, std::string> parse_ini(const std::string& text) {
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ArgumentError("config line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ArgumentError("config line " + std::to_string(lineno) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        out[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
    }
    return out;
}

void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& settings) {
    for (const auto& [name, value] : settings) {
        const auto& keys = config_keys();
        const auto it = std::find_if(keys.begin(), keys.end(),
                                     [&](const ConfigKey& k) { return k.section + "." + k.key == name; });
        if (it == keys.end()) throw ArgumentError("unknown config key: " + name);
        it->set(cfg, value);
    }
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    apply_settings(cfg, parse_ini(buf.str()));
}

Range parse_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ArgumentError("range must be a:b:step, got '" + text + "'");
    Range r{to_real(parts[0]), to_real(parts[1]), to_real(parts[2])};
    if (!(r.step > 0) || !(r.b >= r.a)) throw ArgumentError("range needs a <= b and step > 0: '" + text + "'");
    return r;
}

std::pair<int, int> parse_level_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw ArgumentError("level range must be a:b, got '" + text + "'");
    const int a = to_int(parts[0]);
    const int b = to_int(parts[1]);
    if (a < 0 || b < a) throw ArgumentError("level range needs 0 <= a <= b: '" + text + "'");
    return {a, b};
}

void validate_config(const RunConfig& cfg) {
    (void)cfg.potential();
    if (cfg.n.empty()) throw ArgumentError("at least one channel degree n is required");
    for (int n : cfg.n) Channel(cfg.d, n);
    if (cfg.lmax < 0) throw ArgumentError("lmax must be >= 0");
    if (!(cfg.ppw >= 40)) throw ArgumentError("ppw must be >= 40");
    if (!(cfg.rel_tol > 0 && cfg.rel_tol < 1e-3)) throw ArgumentError("rel_tol must lie in (0, 1e-3)");
    if (cfg.l_first < 0 || cfg.l_last - cfg.l_first + 1 < 10) {
        throw ArgumentError("probe level range must hold at least 10 levels");
    }
    if (!(cfg.sigma > 0)) throw ArgumentError("sigma must be > 0");
    if (!(cfg.phi_halfwidth > 0) || !(cfg.psi_halfwidth > 0)) throw ArgumentError("bump halfwidths must be > 0");
    if (!(cfg.phi_center - cfg.phi_halfwidth > 0) || !(cfg.psi_center - cfg.psi_halfwidth > 0)) {
        throw ArgumentError("bump supports must stay away from r = 0");
    }
    if (!(cfg.epsilon > 0 && cfg.epsilon <= 0.25)) throw ArgumentError("epsilon must lie in (0, 1/4]");
    for (double lam : cfg.ladder) {
        if (!(lam > 0)) throw ArgumentError("ladder energies must be > 0");
    }
    if (cfg.L < 0) throw ArgumentError("L must be >= 0");
    if (!(cfg.r.a > 0) || !(cfg.s.a > 0)) throw ArgumentError("kernel radii must be > 0");
    if (cfg.out.empty()) throw ArgumentError("output directory must not be empty");
}

nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& k : config_keys()) j[k.section][k.key] = k.get(cfg);
    return j;
}

}  // namespace specprobe::cli
