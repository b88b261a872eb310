#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "specprobe/csv.hpp"
#include "specprobe/errors.hpp"
#include "specprobe/specfun.hpp"

#ifndef SPECPROBE_VERSION
#define SPECPROBE_VERSION "unknown"
#endif

namespace specprobe::cli {

namespace {

using Points = std::vector<std::pair<double, double>>;

std::string fixed(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::optional<CsvTable> try_read(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_csv(path);
}

/// Rows of a CSV grouped by the integer column n, in file order.
std::map<int, std::vector<std::size_t>> by_channel(const CsvTable& t) {
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < t.rows.size(); ++i) groups[static_cast<int>(t.number(i, "n"))].push_back(i);
    return groups;
}

IndexWindow window_for(const RunConfig& cfg, std::size_t size) {
    if (cfg.fit_window == "auto") return top_half(size);
    const auto [a, b] = parse_level_range(cfg.fit_window);
    return {static_cast<std::size_t>(a), std::min(size, static_cast<std::size_t>(b) + 1)};
}

struct Row {
    std::string quantity;
    std::string channel;
    double theory;
    std::optional<double> fitted;
    std::string tolerance;
    std::string result;
};

enum class Rule { band, lower_bound };

void add_rows(std::vector<Row>& rows, const std::string& quantity, double theory, double tol, Rule rule,
              const std::optional<CsvTable>& table, const std::function<Points(const CsvTable&, const std::vector<std::size_t>&)>& points,
              const std::function<IndexWindow(std::size_t)>& window) {
    const std::string tol_text = rule == Rule::band ? "± " + fixed(tol, 2) : ">= theory - " + fixed(tol, 2);
    if (!table) {
        rows.push_back({quantity, "-", theory, std::nullopt, tol_text, "not run"});
        return;
    }
    for (const auto& [n, idx] : by_channel(*table)) {
        Row row{quantity, std::to_string(n), theory, std::nullopt, tol_text, "insufficient data"};
        try {
            const auto pts = points(*table, idx);
            const auto fit = fit_power_law(pts, window(pts.size()));
            row.fitted = fit.exponent;
            const bool ok = rule == Rule::band ? std::abs(fit.exponent - theory) <= tol : fit.exponent >= theory - tol;
            row.result = ok ? "pass" : "fail";
        } catch (const std::exception&) {
        }
        rows.push_back(row);
    }
}

}  // namespace

std::string build_report(const std::filesystem::path& dir, const RunConfig& cfg) {
    const auto model = cfg.potential();
    const double c = model.growth_index();
    std::vector<Row> rows;
    const auto all = [](std::size_t size) { return IndexWindow{0, size}; };
    const auto configured = [&](std::size_t size) { return window_for(cfg, size); };

    add_rows(rows, "level spacing", (c - 1) / (2 * c), 0.03, Rule::band, try_read(dir / "spectrum.csv"),
             [](const CsvTable& t, const std::vector<std::size_t>& idx) {
                 Points pts;
                 for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
                     const double a = t.number(idx[k], "lambda");
                     pts.emplace_back(a, t.number(idx[k + 1], "lambda") - a);
                 }
                 return pts;
             },
             configured);
    add_rows(rows, "amplitude abs(C)", (c - 1) / (4 * c), 0.03, Rule::lower_bound, try_read(dir / "wkb.csv"),
             [](const CsvTable& t, const std::vector<std::size_t>& idx) {
                 Points pts;
                 for (std::size_t i : idx) pts.emplace_back(t.number(i, "lambda"), t.number(i, "absC"));
                 return pts;
             },
             configured);
    add_rows(rows, "probe abs(G)", -1 / (2 * c), 0.05, Rule::band, try_read(dir / "probe.csv"),
             [](const CsvTable& t, const std::vector<std::size_t>& idx) {
                 Points pts;
                 for (std::size_t i : idx) pts.emplace_back(t.number(i, "lambda"), t.number(i, "absG"));
                 return pts;
             },
             all);
    add_rows(rows, "turning-point error integral", -(0.5 + 1 / (2 * c)), 0.1, Rule::band,
             try_read(dir / "appendix.csv"),
             [](const CsvTable& t, const std::vector<std::size_t>& idx) {
                 Points pts;
                 for (std::size_t i : idx) pts.emplace_back(t.number(i, "lambda"), t.number(i, "total"));
                 return pts;
             },
             all);

    std::ostringstream md;
    md << "# specprobe report\n\n";
    md << "Model `" << model.id() << "` (c = " << fixed(c, 3) << "), d = " << cfg.d << ".\n\n";
    md << "| quantity | n | theoretical exponent | fitted exponent | tolerance | result |\n";
    md << "|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        md << "| " << r.quantity << " | " << r.channel << " | " << fixed(r.theory) << " | "
           << (r.fitted ? fixed(*r.fitted) : std::string("-")) << " | " << r.tolerance << " | " << r.result
           << " |\n";
    }
    md << "\nSpacing and amplitude fits use the ";
    md << (cfg.fit_window == "auto" ? std::string("top half of the levels") : "level window " + cfg.fit_window);
    md << "; probe and error-integral fits use every row.\n\n";
    md << "## Configuration\n\n```json\n" << to_json(cfg).dump(2) << "\n```\n\n";
    md << "## Versions\n\nspecprobe " << SPECPROBE_VERSION << ", compiler " << __VERSION__ << "\n";
    return md.str();
}

void write_report(const std::filesystem::path& dir, const RunConfig& cfg) {
    const auto text = build_report(dir, cfg);
    std::ofstream out(dir / "report.md", std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / "report.md").string());
    out << text;
    if (!out) throw IoError("write failed for " + (dir / "report.md").string());
}

}  // namespace specprobe::cli
