#include "specprobe/persistence.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "specprobe/errors.hpp"

namespace specprobe {

namespace {

using nlohmann::json;

constexpr char magic[4] = {'S', 'P', 'B', 'S'};

std::filesystem::path sidecar(const std::filesystem::path& path) {
    auto p = path;
    p += ".samples.bin";
    return p;
}

json tolerances_json(const SolverOptions& o) {
    return {{"rel_tol", o.rel_tol},
            {"bracket_gaps", o.bracket_gaps},
            {"energy_margin", o.energy_margin},
            {"points_per_wavelength", o.grid.points_per_wavelength},
            {"decay_margin", o.grid.decay_margin},
            {"r_min_cap", o.grid.r_min_cap},
            {"min_intervals", o.grid.min_intervals}};
}

SolverOptions tolerances_from(const json& j) {
    SolverOptions o;
    o.rel_tol = j.at("rel_tol").get<double>();
    o.bracket_gaps = j.at("bracket_gaps").get<double>();
    o.energy_margin = j.at("energy_margin").get<double>();
    o.grid.points_per_wavelength = j.at("points_per_wavelength").get<double>();
    o.grid.decay_margin = j.at("decay_margin").get<double>();
    o.grid.r_min_cap = j.at("r_min_cap").get<double>();
    o.grid.min_intervals = j.at("min_intervals").get<std::size_t>();
    return o;
}

}  // namespace

void save_spectrum(const SpectrumTable& table, const std::filesystem::path& path) {
    json doc;
    doc["version"] = spectrum_format_version;
    doc["model"] = table.model_id();
    doc["harmonic"] = table.model.is_harmonic();
    doc["d"] = table.channel.d();
    doc["n"] = table.channel.n();
    doc["grid"] = {{"r_min", table.grid.r_min},
                   {"r_max", table.grid.r_max},
                   {"h", table.grid.h},
                   {"intervals", table.grid.intervals}};
    doc["tolerances"] = tolerances_json(table.tolerances);
    doc["levels"] = json::array();
    for (const auto& p : table.pairs) {
        doc["levels"].push_back({{"l", p.level},
                                 {"lambda", p.lambda},
                                 {"nodes", p.node_count},
                                 {"f_at_1", p.f_at_1},
                                 {"fprime_at_1", p.fprime_at_1},
                                 {"norm_check", p.norm_check}});
    }
    doc["samples"] = sidecar(path).filename().string();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());

    std::ofstream bin(sidecar(path), std::ios::binary | std::ios::trunc);
    if (!bin) throw IoError("cannot write " + sidecar(path).string());
    const std::uint32_t version = spectrum_format_version;
    const std::uint64_t rows = table.pairs.size();
    const std::uint64_t cols = table.grid.size();
    bin.write(magic, 4);
    bin.write(reinterpret_cast<const char*>(&version), sizeof version);
    bin.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    bin.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    for (const auto& p : table.pairs) {
        bin.write(reinterpret_cast<const char*>(p.samples.data()),
                  static_cast<std::streamsize>(p.samples.size() * sizeof(double)));
    }
    if (!bin) throw IoError("write failed for " + sidecar(path).string());
}

std::optional<SpectrumTable> load_spectrum(const std::filesystem::path& path, const Channel& channel,
                                           const PotentialModel& model, const SolverOptions& tolerances) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("corrupt spectrum file " + path.string() + ": " + e.what());
    }

    try {
        if (doc.at("version").get<int>() != spectrum_format_version) return std::nullopt;
        if (doc.at("model").get<std::string>() != model.id()) return std::nullopt;
        if (doc.at("d").get<int>() != channel.d() || doc.at("n").get<int>() != channel.n()) return std::nullopt;
        if (!(tolerances_from(doc.at("tolerances")) == tolerances)) return std::nullopt;

        RadialGrid grid;
        grid.r_min = doc["grid"].at("r_min").get<double>();
        grid.r_max = doc["grid"].at("r_max").get<double>();
        grid.h = doc["grid"].at("h").get<double>();
        grid.intervals = doc["grid"].at("intervals").get<std::size_t>();

        std::ifstream bin(sidecar(path), std::ios::binary);
        if (!bin) throw IoError("missing sample file " + sidecar(path).string());
        char m[4];
        std::uint32_t version = 0;
        std::uint64_t rows = 0, cols = 0;
        bin.read(m, 4);
        bin.read(reinterpret_cast<char*>(&version), sizeof version);
        bin.read(reinterpret_cast<char*>(&rows), sizeof rows);
        bin.read(reinterpret_cast<char*>(&cols), sizeof cols);
        const auto& levels = doc.at("levels");
        if (!bin || std::memcmp(m, magic, 4) != 0 || version != spectrum_format_version ||
            rows != levels.size() || cols != grid.size()) {
            throw IoError("sample file does not match " + path.string());
        }

        SpectrumTable table{channel, model, grid, tolerances, {}};
        for (const auto& lv : levels) {
            EigenPair p;
            p.level = lv.at("l").get<int>();
            p.lambda = lv.at("lambda").get<double>();
            p.node_count = lv.at("nodes").get<int>();
            p.f_at_1 = lv.at("f_at_1").get<double>();
            p.fprime_at_1 = lv.at("fprime_at_1").get<double>();
            p.norm_check = lv.at("norm_check").get<double>();
            p.samples.resize(cols);
            bin.read(reinterpret_cast<char*>(p.samples.data()), static_cast<std::streamsize>(cols * sizeof(double)));
            if (!bin) throw IoError("truncated sample file " + sidecar(path).string());
            if (p.level != static_cast<int>(table.pairs.size())) throw IoError("levels out of order in " + path.string());
            table.pairs.push_back(std::move(p));
        }
        return table;
    } catch (const json::exception& e) {
        throw IoError("malformed spectrum file " + path.string() + ": " + e.what());
    }
}

SpectrumTable load_or_solve(const std::filesystem::path& path, const Channel& channel, const PotentialModel& model,
                            int l_max, const SolverOptions& opts) {
    if (auto cached = load_spectrum(path, channel, model, opts)) {
        if (cached->l_max() == l_max) return std::move(*cached);
    }
    auto table = solve_spectrum(channel, model, l_max, opts);
    save_spectrum(table, path);
    return table;
}

}  // namespace specprobe
