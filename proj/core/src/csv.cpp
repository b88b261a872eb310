#include "specprobe/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "specprobe/errors.hpp"

namespace specprobe {

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool append) {
    std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

template <typename... Ts>
void row(std::ostream& out, const Ts&... fields) {
    bool first = true;
    auto put = [&](const auto& v) {
        if (!first) out << ',';
        first = false;
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) out << format_real(v);
        else out << v;
    };
    (put(fields), ...);
    out << '\n';
}

}  // namespace

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ArgumentError("csv column not found: " + name);
}

double CsvTable::number(std::size_t r, const std::string& name) const {
    const auto& text = rows.at(r).at(column(name));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str()) throw ArgumentError("not a number in column " + name + ": " + text);
    return v;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
        } else {
            if (fields.size() != table.header.size()) throw IoError("ragged csv row in " + path.string());
            table.rows.push_back(std::move(fields));
        }
    }
    if (!have_header) throw IoError("empty csv " + path.string());
    return table;
}

void write_spectrum_csv(const SpectrumTable& table, const std::filesystem::path& path, bool append) {
    auto out = open_out(path, append);
    if (!append) out << "n,l,lambda,nodes,f_at_1,fprime_at_1\n";
    for (const auto& p : table.pairs) {
        row(out, table.channel.n(), p.level, p.lambda, p.node_count, p.f_at_1, p.fprime_at_1);
    }
    finish(out, path);
}

void write_wkb_csv(const Channel& channel, const std::vector<WkbSummary>& rows,
                   const std::filesystem::path& path, bool append) {
    auto out = open_out(path, append);
    if (!append) out << "n,l,lambda,T,X,Z,action,bs_residual,absC,allowed_a,allowed_b\n";
    const double nan = std::nan("");
    for (const auto& s : rows) {
        row(out, channel.n(), s.level, s.lambda, s.T, s.X, s.Z, s.action, s.bs_residual, std::abs(s.C_lambda),
            s.allowed ? s.allowed->a : nan, s.allowed ? s.allowed->b : nan);
    }
    finish(out, path);
}

void write_probe_csv(const Channel& channel, const std::vector<ProbePoint>& rows,
                     const std::filesystem::path& path, bool append) {
    auto out = open_out(path, append);
    if (!append) out << "n,l,lambda,tau,j,k,reG,imG,absG,predicted_abs,isolation\n";
    for (const auto& p : rows) {
        row(out, channel.n(), p.l, p.lambda, p.tau, p.j, p.k, p.G.real(), p.G.imag(), std::abs(p.G),
            p.predicted_magnitude, p.isolation);
    }
    finish(out, path);
}

}  // namespace specprobe
