#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/oracles.hpp"
#include "commands.hpp"
#include "specprobe/eigensolve.hpp"
#include "specprobe/kernel.hpp"
#include "specprobe/probe.hpp"
#include "specprobe/wkb.hpp"

using namespace specprobe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

const SpectrumTable& quartic(int n) {
    static std::map<int, SpectrumTable> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, solve_spectrum(Channel(3, n), PotentialModel::quartic(), 60)).first;
    return it->second;
}

Outcome oscillator_exactness() {
    double worst = 0;
    for (int n : {0, 1}) {
        const auto t = solve_spectrum(Channel(3, n), PotentialModel::harmonic(), 20);
        for (const auto& p : t.pairs) {
            const double exact = 4.0 * p.level + 3 + 2 * n;
            worst = std::max(worst, std::abs(p.lambda - exact) / exact);
        }
    }
    return {worst <= 1e-7, fmt("max relative error %.2e over n in {0,1}, l <= 20 (tol 1e-7)", worst)};
}

Outcome oracle_levels() {
    // s-wave quartic in d = 3 equals the odd states of -u'' + x^4 u on the line
    auto U = [](double r) { return r * r * r * r; };
    const double o0 = oracle::extrapolated_eigenvalue(U, 6.0, 0);
    const double o1 = oracle::extrapolated_eigenvalue(U, 6.0, 1);
    const auto& q = quartic(0);
    const double e0 = std::abs(q.pairs[0].lambda - o0) / o0;
    const double e1 = std::abs(q.pairs[1].lambda - o1) / o1;
    const double r0 = std::abs(q.pairs[0].lambda - 3.7996730) / 3.7996730;
    const double r1 = std::abs(q.pairs[1].lambda - 11.6447455) / 11.6447455;
    const double worst = std::max({e0, e1, r0, r1});
    return {worst <= 1e-5, fmt("lambda_0 = %.10f, lambda_1 = %.10f, max deviation from oracle/reference %.2e (tol 1e-5)",
                               q.pairs[0].lambda, q.pairs[1].lambda, worst)};
}

Outcome node_counts() {
    int checked = 0;
    int bad = 0;
    for (int d : {3, 4, 5}) {
        for (int n = 0; n <= 3; ++n) {
            const auto t = solve_spectrum(Channel(d, n), PotentialModel::quartic(), 40);
            for (const auto& p : t.pairs) {
                ++checked;
                if (p.node_count != p.level) ++bad;
            }
        }
    }
    return {bad == 0, fmt("%.0f levels checked, %.0f with node_count != l", checked, bad)};
}

Outcome quantization() {
    const auto& q = quartic(0);
    double worst_high = 0;
    std::vector<double> low, high;
    for (int l = 5; l <= 40; ++l) {
        const double r = std::abs(bs_residual(q.pairs[l], q.channel, q.model));
        if (l <= 15) low.push_back(r);
        if (l >= 20) {
            high.push_back(r);
            worst_high = std::max(worst_high, r);
        }
    }
    const auto osc = solve_spectrum(Channel(3, 0), PotentialModel::harmonic(), 30);
    double worst_osc = 0;
    for (const auto& p : osc.pairs) worst_osc = std::max(worst_osc, std::abs(bs_residual(p, osc.channel, osc.model)));
    const double m_low = median(low);
    const double m_high = median(high);
    const bool pass = worst_high <= 0.05 && m_high < m_low && worst_osc <= 1e-6;
    return {pass, fmt("quartic max |r| on [20,40] = %.2e, medians [5,15] %.2e > [20,40] %.2e; oscillator max %.2e",
                      worst_high, m_low, m_high, worst_osc)};
}

Outcome gap_growth() {
    const auto& q = quartic(0);
    const auto sextic = solve_spectrum(Channel(3, 0), PotentialModel::sextic(), 60);
    const double e4 = gap_scaling(q).exponent;
    const double e6 = gap_scaling(sextic).exponent;
    const bool pass = std::abs(e4 - 0.25) <= 0.03 && std::abs(e6 - 1.0 / 3.0) <= 0.03;
    return {pass, fmt("quartic exponent %.4f (0.25 +- 0.03), sextic %.4f (0.333 +- 0.03)", e4, e6)};
}

Outcome amplitude_bound() {
    const auto& q = quartic(0);
    const auto rows = summarize(q);
    double floor_const = 1e300;
    for (int l = 20; l <= 50; ++l) {
        floor_const = std::min(floor_const, std::abs(rows[l].C_lambda) * std::pow(rows[l].lambda, -0.125));
    }
    const double e = amplitude_scaling(rows, IndexWindow{20, 51}).exponent;
    return {floor_const > 0 && e >= 0.095,
            fmt("min |C| lambda^-1/8 on [20,50] = %.4f, fitted exponent %.4f (>= 0.095)", floor_const, e)};
}

Outcome allowed_region() {
    const auto& q = quartic(0);
    std::vector<std::pair<double, double>> pts;
    double lo = 1e300, hi = 0;
    for (int l = 20; l <= 50; ++l) {
        const auto& p = q.pairs[l];
        const auto c = extract_C_lambda(p, q.channel, q.model);
        const double res = allowed_region_residual(p, c, q, Interval{0.8, 1.2});
        const double normalized = res / (std::abs(c) * std::pow(p.lambda, -0.5));
        lo = std::min(lo, normalized);
        hi = std::max(hi, normalized);
        pts.emplace_back(p.lambda, normalized);
    }
    const double slope = fit_power_law(pts).exponent;
    return {slope <= 0.05, fmt("normalized residual in [%.3e, %.3e], fitted slope %.3f (<= 0.05)", lo, hi, slope)};
}

std::vector<int> doubling_levels(const SpectrumTable& t, double start) {
    std::vector<int> out;
    for (double target = start; target <= t.pairs.back().lambda; target *= 2) {
        int best = 0;
        for (const auto& p : t.pairs) {
            if (std::abs(std::log(p.lambda / target)) < std::abs(std::log(t.pairs[best].lambda / target))) best = p.level;
        }
        out.push_back(best);
    }
    return out;
}

Outcome langer() {
    const auto& q = quartic(0);
    std::vector<std::pair<double, double>> pts;
    bool decreasing = true;
    std::string trail;
    for (int l : doubling_levels(q, 20)) {
        const double r = langer_residual(q.pairs[l], q).residual;
        if (!pts.empty() && r >= pts.back().second) decreasing = false;
        pts.emplace_back(q.pairs[l].lambda, r);
        trail += fmt(" %.3g", r);
    }
    const double e = fit_power_law(pts).exponent;
    return {decreasing && e <= -0.5,
            fmt("fitted exponent %.3f (<= -0.5) over %.0f ladder levels;", e, static_cast<double>(pts.size())) +
                " residuals" + trail};
}

Outcome appendix() {
    std::vector<std::pair<double, double>> pts;
    for (double lambda : {100.0, 200.0, 400.0, 800.0, 1600.0}) {
        pts.emplace_back(lambda, appendix_error_integral(Channel(3, 0), PotentialModel::quartic(), lambda, 0.1).total);
    }
    const double e = fit_power_law(pts).exponent;
    return {std::abs(e + 0.75) <= 0.1, fmt("fitted exponent %.4f (-0.75 +- 0.1), total at 100: %.4e, at 1600: %.4e", e,
                                           pts.front().second, pts.back().second)};
}

Outcome probe_bound() {
    bool pass = true;
    std::string detail;
    for (int n : {0, 1}) {
        const auto& q = quartic(n);
        const auto phi = make_bump(1.0, 0.2, q.grid);
        const auto psi = make_bump(1.5, 0.2, q.grid);
        const auto seq = probe_sequence(q, phi, psi, WindowSpec{1.0}, 20, 50);
        double worst_identity = 0;
        for (const auto& p : seq.points) {
            const double rel = std::abs(p.G - p.dominant) / std::abs(p.G);
            const double allowed = 5 * p.isolation / std::abs(p.G);
            worst_identity = std::max(worst_identity, allowed > 0 ? rel / allowed : (rel > 0 ? 1e300 : 0.0));
        }
        const bool ok = std::abs(seq.fit.exponent + 0.25) <= 0.05 && seq.lower_bound_const > 0 && worst_identity <= 1;
        pass = pass && ok;
        detail += fmt("n=%.0f: exponent %.4f, lower bound const %.3e, identity error/bound %.2e; ", n, seq.fit.exponent,
                      seq.lower_bound_const, worst_identity);
    }
    return {pass, detail};
}

Outcome overlap_prediction() {
    const auto& q = quartic(0);
    const auto phi = make_bump(1.0, 0.2, q.grid);
    std::vector<std::pair<double, double>> pts;
    double c_fit = 0;
    for (int l = 20; l <= 50; ++l) {
        const auto& p = q.pairs[l];
        const auto c = extract_C_lambda(p, q.channel, q.model);
        const auto pred = predicted_overlap(rephase_amplitude(c, p.lambda), p.lambda, phi.mass);
        const auto ov = overlap(phi, std::sqrt(p.lambda), p);
        const double ratio = std::abs(ov - pred) / (std::abs(c) * std::pow(p.lambda, -0.75));
        c_fit = std::max(c_fit, ratio);
        pts.emplace_back(p.lambda, ratio);
    }
    const double slope = fit_power_law(pts).exponent;
    return {slope <= 0.05, fmt("C = %.4f (max ratio over [20,50]), fitted slope of ratio %.3f (<= 0.05)", c_fit, slope)};
}

Outcome kernel_invariants() {
    double herm = 0;
    double worst_imag0 = 0;
    double min_diag = 1e300;
    double parseval_err = 0;
    for (int n : {0, 1, 2}) {
        const auto& q = quartic(n);
        for (double r : {0.5, 0.8, 1.0, 1.3, 1.7}) {
            for (double s : {0.6, 1.0, 1.4, 2.0}) {
                for (double t : {0.1, 0.5, 1.3, 4.0}) {
                    const auto k = channel_kernel(q, t, r, s, 20);
                    herm = std::max(herm, std::abs(channel_kernel(q, -t, s, r, 20) - std::conj(k)) / (1 + std::abs(k)));
                }
                worst_imag0 = std::max(worst_imag0, std::abs(channel_kernel(q, 0, r, s, 20).imag()));
            }
            min_diag = std::min(min_diag, channel_kernel(q, 0, r, r, 20).real());
        }
        parseval_err = std::max(parseval_err, std::abs(parseval(q, 20) - 21));
    }
    const bool pass = herm <= 1e-12 && worst_imag0 <= 1e-12 && min_diag >= -1e-12 && parseval_err <= 1e-6;
    return {pass, fmt("Hermitian defect %.2e, Im K(0) %.2e, min K(0,r,r) %.3e, |Parseval - 21| %.2e", herm, worst_imag0,
                      min_diag, parseval_err)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
    const auto root = fs::temp_directory_path() / "specprobe_acceptance_determinism";
    fs::remove_all(root);
    std::vector<fs::path> dirs = {root / "a", root / "b"};
    for (const auto& dir : dirs) {
        fs::create_directories(dir);
        for (const char* cmd : {"spectrum", "wkb", "probe", "kernel"}) {
            const std::vector<std::string> args = {"specprobe", cmd, "--out", dir.string(), "--n", "0,1"};
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            if (code != 0) return {false, std::string(cmd) + " exited with " + std::to_string(code) + ": " + err.str()};
        }
    }
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        const auto other = dirs[1] / entry.path().filename();
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
            return {false, entry.path().filename().string() + " differs between runs"};
        }
    }
    fs::remove_all(root);
    return {compared >= 5, fmt("%.0f CSV artifacts byte-identical across two runs", compared)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"solver exactness (oscillator)", oscillator_exactness},
        {"oracle eigenvalues (quartic)", oracle_levels},
        {"node counts", node_counts},
        {"quantization residual", quantization},
        {"gap growth exponents", gap_growth},
        {"amplitude lower bound", amplitude_bound},
        {"allowed-region asymptotics", allowed_region},
        {"Langer comparison", langer},
        {"turning-point error integral", appendix},
        {"probe lower bound", probe_bound},
        {"overlap prediction", overlap_prediction},
        {"kernel invariants", kernel_invariants},
        {"determinism", determinism},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("%s %2d %-30s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
