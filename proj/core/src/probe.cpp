#include "specprobe/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "specprobe/errors.hpp"
#include "specprobe/wkb.hpp"

namespace specprobe {

namespace {

/// Index range covering the support, widened to an even interval count.
std::pair<std::size_t, std::size_t> support_range(const TestFunction& tf) {
    std::size_t first = tf.grid.index_of(tf.a);
    std::size_t last = tf.grid.index_of(tf.b);
    if (first > 0) --first;
    if (last + 1 < tf.grid.size()) ++last;
    if ((last - first) % 2) {
        if (last + 1 < tf.grid.size()) ++last;
        else --first;
    }
    return {first, last};
}

}  // namespace

TestFunction make_bump(double center, double halfwidth, const RadialGrid& grid) {
    if (!(halfwidth > 0)) throw ArgumentError("bump halfwidth must be > 0");
    TestFunction tf;
    tf.center = center;
    tf.halfwidth = halfwidth;
    tf.a = center - halfwidth;
    tf.b = center + halfwidth;
    if (!(tf.a > 0)) throw ArgumentError("bump support must stay away from r = 0");
    if (tf.a < grid.r_min || tf.b > grid.r_max) throw ArgumentError("bump support leaves the grid");
    tf.grid = grid;
    tf.samples.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = (grid.r(i) - center) / halfwidth;
        if (std::abs(u) < 1) tf.samples[i] = std::exp(-1.0 / (1.0 - u * u));
    }
    const auto [first, last] = support_range(tf);
    std::vector<double> part(tf.samples.begin() + first, tf.samples.begin() + last + 1);
    tf.mass = simpson(part, grid.h);
    for (auto& v : part) v *= v;
    tf.norm = std::sqrt(simpson(part, grid.h));
    return tf;
}

double window_hat(const WindowSpec& window, double mu) { return window.hat(mu); }

std::complex<double> overlap(const TestFunction& tf, double j, const EigenPair& pair) {
    if (pair.samples.size() != tf.grid.size()) throw ArgumentError("test function and eigenpair grids differ");
    const auto [first, last] = support_range(tf);
    std::vector<double> re(last - first + 1), im(last - first + 1);
    for (std::size_t i = first; i <= last; ++i) {
        const double v = tf.samples[i] * pair.samples[i];
        const double phase = j * tf.grid.r(i);
        re[i - first] = v * std::cos(phase);
        im[i - first] = v * std::sin(phase);
    }
    return {simpson(re, tf.grid.h), simpson(im, tf.grid.h)};
}

std::complex<double> predicted_overlap(std::complex<double> c_lambda, double lambda, double mass) {
    if (!(lambda > 0)) throw DomainError("predicted_overlap: λ must be > 0");
    return std::conj(c_lambda) * (mass / (2 * std::pow(lambda, 0.25)));
}

std::complex<double> probe_G(const SpectrumTable& table, double tau, double j, double k,
                             const WindowSpec& window, const TestFunction& phi, const TestFunction& psi) {
    if (table.pairs.empty()) throw ArgumentError("empty spectrum table");
    const double tail = std::abs(window.hat(table.pairs.back().lambda - tau));
    if (!(tail < 1e-14)) {
        throw TruncationError("spectrum not solved high enough for this window", tail);
    }
    const std::size_t n = table.pairs.size();
    std::vector<double> weight(n);
    for (std::size_t l = 0; l < n; ++l) weight[l] = window.hat(table.pairs[l].lambda - tau);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return std::abs(weight[x]) < std::abs(weight[y]); });

    std::complex<double> sum = 0;
    for (std::size_t l : order) {
        if (weight[l] == 0) continue;
        sum += weight[l] * overlap(phi, j, table.pairs[l]) * overlap(psi, -k, table.pairs[l]);
    }
    return sum;
}

double isolation_check(const SpectrumTable& table, int l, const WindowSpec& window) {
    if (l < 0 || l > table.l_max()) throw ArgumentError("isolation_check: level outside the solved range");
    const double lambda = table.pairs[static_cast<std::size_t>(l)].lambda;
    double sum = 0;
    for (const auto& pair : table.pairs) {
        if (pair.level != l) sum += std::abs(window.hat(pair.lambda - lambda));
    }
    return sum;
}

ProbeSequence probe_sequence(const SpectrumTable& table, const TestFunction& phi, const TestFunction& psi,
                             const WindowSpec& window, int l_first, int l_last) {
    if (l_first < 0 || l_last > table.l_max() || l_first > l_last) {
        throw ArgumentError("probe level range outside the solved spectrum");
    }
    if (l_last - l_first + 1 < 10) throw ArgumentError("probe sequence needs at least 10 levels");
    // Ω_λ grows with λ, so the lowest probed level is the binding one
    const Interval omega = allowed_interval(table.channel, table.model, table.pairs[l_first].lambda);
    if (!omega.contains(phi.a, phi.b) || !omega.contains(psi.a, psi.b)) {
        throw ArgumentError("test function support not inside the allowed region");
    }

    const double c = table.model.growth_index();
    ProbeSequence seq;
    std::vector<std::pair<double, double>> pts;
    seq.lower_bound_const = std::numeric_limits<double>::infinity();
    for (int l = l_first; l <= l_last; ++l) {
        const auto& pair = table.pairs[static_cast<std::size_t>(l)];
        ProbePoint p;
        p.l = l;
        p.lambda = pair.lambda;
        p.tau = pair.lambda;
        p.j = p.k = std::sqrt(pair.lambda);
        p.G = probe_G(table, p.tau, p.j, p.k, window, phi, psi);
        const double abs_c = std::abs(extract_C_lambda(pair, table.channel, table.model));
        p.predicted_magnitude = window.hat0() * abs_c * abs_c * phi.mass * psi.mass / (4 * std::sqrt(pair.lambda));
        p.isolation = isolation_check(table, l, window);
        p.dominant = window.hat0() * overlap(phi, p.j, pair) * overlap(psi, -p.k, pair);
        seq.lower_bound_const =
            std::min(seq.lower_bound_const, std::abs(p.G) * std::pow(1 + p.tau + p.j + p.k, 1 / (2 * c)));
        pts.emplace_back(p.lambda, std::abs(p.G));
        seq.points.push_back(p);
    }
    seq.fit = fit_power_law(pts);
    return seq;
}

}  // namespace specprobe
