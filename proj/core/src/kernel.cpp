#include "specprobe/kernel.hpp"

#include <cmath>
#include <fstream>

#include "specprobe/csv.hpp"
#include "specprobe/errors.hpp"
#include "specprobe/specfun.hpp"

namespace specprobe {

namespace {

std::int64_t binomial(std::int64_t a, std::int64_t b) {
    if (b < 0 || a < b) return 0;
    b = std::min(b, a - b);
    std::int64_t out = 1;
    for (std::int64_t i = 1; i <= b; ++i) out = out * (a - b + i) / i;
    return out;
}

void check_level(const SpectrumTable& table, int L) {
    if (L < 0 || L > table.l_max()) throw ArgumentError("truncation level outside the solved spectrum");
}

double weight(const Channel& ch, double r, double s) { return std::pow(r * s, -0.5 * (ch.d() - 1)); }

std::vector<std::vector<double>> gram(const SpectrumTable& table, int L) {
    const auto n = static_cast<std::size_t>(L) + 1;
    std::vector<std::vector<double>> g(n, std::vector<double>(n));
    std::vector<double> prod(table.grid.size());
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            const auto& fa = table.pairs[a].samples;
            const auto& fb = table.pairs[b].samples;
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fa[i] * fb[i];
            g[a][b] = g[b][a] = simpson(prod, table.grid.h);
        }
    }
    return g;
}

}  // namespace

std::int64_t sphere_dim(int d, int n) {
    if (d < 3) throw ArgumentError("sphere_dim: d must be >= 3");
    if (n < 0) throw ArgumentError("sphere_dim: n must be >= 0");
    return binomial(d + n - 1, d - 1) - binomial(d + n - 3, d - 1);
}

std::complex<double> channel_kernel(const SpectrumTable& table, double t, double r, double s, int L) {
    check_level(table, L);
    std::complex<double> sum = 0;
    for (int l = 0; l <= L; ++l) {
        const auto& p = table.pairs[static_cast<std::size_t>(l)];
        sum += std::polar(1.0, -p.lambda * t) *
               (sample_at(p.samples, table.grid, r) * sample_at(p.samples, table.grid, s));
    }
    return sum;
}

std::complex<double> weighted_kernel(const SpectrumTable& table, double t, double r, double s, int L) {
    return weight(table.channel, r, s) * channel_kernel(table, t, r, s, L);
}

ChannelKernelGrid kernel_grid(const SpectrumTable& table, const std::vector<double>& t,
                              const std::vector<double>& r, const std::vector<double>& s, int L) {
    check_level(table, L);
    if (t.empty() || r.empty() || s.empty()) throw ArgumentError("kernel grid axes must be nonempty");
    const auto levels = static_cast<std::size_t>(L) + 1;
    auto sample_axis = [&](const std::vector<double>& axis) {
        std::vector<double> f(levels * axis.size());
        for (std::size_t l = 0; l < levels; ++l) {
            for (std::size_t i = 0; i < axis.size(); ++i) {
                f[l * axis.size() + i] = sample_at(table.pairs[l].samples, table.grid, axis[i]);
            }
        }
        return f;
    };
    const auto fr = sample_axis(r);
    const auto fs = sample_axis(s);

    ChannelKernelGrid out{table.channel, t, r, s, L, {}};
    out.values.assign(t.size() * r.size() * s.size(), 0.0);
    for (std::size_t it = 0; it < t.size(); ++it) {
        for (std::size_t l = 0; l < levels; ++l) {
            const auto phase = std::polar(1.0, -table.pairs[l].lambda * t[it]);
            for (std::size_t ir = 0; ir < r.size(); ++ir) {
                const auto a = phase * fr[l * r.size() + ir];
                for (std::size_t is = 0; is < s.size(); ++is) {
                    out.values[(it * r.size() + ir) * s.size() + is] += a * fs[l * s.size() + is];
                }
            }
        }
    }
    return out;
}

void export_kernel_grid(const SpectrumTable& table, const std::vector<double>& t, const std::vector<double>& r,
                        const std::vector<double>& s, int L, const std::filesystem::path& path) {
    const auto grid = kernel_grid(table, t, r, s, L);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << "t,r,s,reK,imK,weighted_reK,weighted_imK\n";
    for (std::size_t it = 0; it < t.size(); ++it) {
        for (std::size_t ir = 0; ir < r.size(); ++ir) {
            for (std::size_t is = 0; is < s.size(); ++is) {
                const auto k = grid.at(it, ir, is);
                const auto w = weight(table.channel, r[ir], s[is]) * k;
                out << format_real(t[it]) << ',' << format_real(r[ir]) << ',' << format_real(s[is]) << ','
                    << format_real(k.real()) << ',' << format_real(k.imag()) << ',' << format_real(w.real())
                    << ',' << format_real(w.imag()) << '\n';
            }
        }
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<KernelRow> read_kernel_csv(const std::filesystem::path& path) {
    const auto csv = read_csv(path);
    std::vector<KernelRow> rows;
    rows.reserve(csv.rows.size());
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        rows.push_back({csv.number(i, "t"), csv.number(i, "r"), csv.number(i, "s"), csv.number(i, "reK"),
                        csv.number(i, "imK"), csv.number(i, "weighted_reK"), csv.number(i, "weighted_imK")});
    }
    return rows;
}

double parseval(const SpectrumTable& table, int L) {
    check_level(table, L);
    const auto g = gram(table, L);
    double sum = 0;
    for (const auto& row : g) {
        for (double v : row) sum += v * v;
    }
    return sum;
}

double kernel_autocorrelation(const SpectrumTable& table, int L, double t) {
    check_level(table, L);
    const auto g = gram(table, L);
    std::complex<double> inner = 0;
    double norm = 0;
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = 0; b < g.size(); ++b) {
            inner += std::polar(1.0, -table.pairs[a].lambda * t) * (g[a][b] * g[a][b]);
            norm += g[a][b] * g[a][b];
        }
    }
    return std::abs(inner) / norm;
}

std::vector<double> linspace_step(double a, double b, double step) {
    if (!(step > 0) || !(b >= a)) throw ArgumentError("range needs a <= b and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = a + static_cast<double>(i) * step;
    return out;
}

}  // namespace specprobe
