#include "specprobe/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "specprobe/errors.hpp"

namespace specprobe {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

/// Root of g on an increasing branch starting at `lo` (g(lo) < 0); the upper end
/// is found by doubling.
double increasing_root(const std::function<double(double)>& g, double lo) {
    double hi = std::max(2 * lo, 1.0);
    for (int i = 0; g(hi) <= 0; ++i) {
        if (i > 200) throw SearchError("no outer turning point found");
        lo = hi;
        hi *= 2;
    }
    return find_root(g, lo, hi, 1e-14);
}

/// A radius where g is negative, found by halving from 1.
double small_start(const std::function<double(double)>& g) {
    double r = 1.0;
    for (int i = 0; g(r) >= 0; ++i) {
        if (i > 1000) throw ArgumentError("no classically allowed radius");
        r *= 0.5;
    }
    return r;
}

double effective_value(const Channel& ch, const PotentialModel& model, double r) {
    return effective_potential(ch, model, r);
}

/// A(r) = ∫_r^T sqrt(λ - U), for r inside the allowed region.
double depth_to_turning_point(const Channel& ch, const PotentialModel& model, double lambda, double T,
                              double r, double rel_tol = 1e-12) {
    if (r >= T) return 0.0;
    auto f = [&](double s) { return std::sqrt(std::max(0.0, lambda - effective_value(ch, model, s))); };
    return integrate_sqrt_singular(f, r, T, SingularEnd::right, rel_tol);
}

/// ξ(r) = ∫_T^r sqrt(U - λ), for r beyond the outer turning point.
double height_past_turning_point(const Channel& ch, const PotentialModel& model, double lambda,
                                 double T, double r, double rel_tol = 1e-12) {
    if (r <= T) return 0.0;
    auto f = [&](double s) { return std::sqrt(std::max(0.0, effective_value(ch, model, s) - lambda)); };
    return integrate_sqrt_singular(f, T, r, SingularEnd::left, rel_tol);
}

bool allowed_set(const Channel& ch, const PotentialModel& model, double lambda, Interval& out) {
    if (!(lambda > 0)) return false;
    const double half = 0.5 * lambda;
    const double r_star = effective_minimizer(ch, model);
    const double u_star = r_star > 0 ? effective_value(ch, model, r_star) : 0.0;
    if (!(u_star < half)) return false;
    auto g = [&](double r) { return effective_value(ch, model, r) - half; };
    const double q = increasing_root(g, r_star > 0 ? r_star : small_start(g));
    double p = 0;
    if (r_star > 0) {
        double lo = r_star;
        while (g(lo) <= 0) lo *= 0.5;
        p = find_root(g, lo, r_star, 1e-14);
    }
    const double a = std::max(p, std::pow(lambda, -0.25));
    if (!(a <= q)) return false;
    // the sublevel set of a convex function is an interval; confirm on samples
    for (int i = 1; i < 512; ++i) {
        const double r = a + (q - a) * i / 512.0;
        if (g(r) > 1e-12 * lambda) return false;
    }
    out = {a, q};
    return true;
}

std::vector<std::size_t> nodes_in(const RadialGrid& grid, double lo, double hi) {
    std::vector<std::size_t> idx;
    const double eps = 1e-12 * std::max(1.0, hi);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r(i);
        if (r >= lo - eps && r <= hi + eps) idx.push_back(i);
    }
    return idx;
}

}  // namespace

TurningPoints turning_points(const Channel& channel, const PotentialModel& model, double lambda) {
    if (!(lambda > 0)) throw ArgumentError("no outer turning point for λ <= 0");
    auto v = [&](double r) { return model.value(r) - lambda; };
    const double X = increasing_root(v, small_start(v));

    const double r_star = effective_minimizer(channel, model);
    auto u = [&](double r) { return effective_value(channel, model, r) - lambda; };
    if (r_star > 0 && !(u(r_star) < 0)) throw ArgumentError("no outer turning point: λ below min U");
    const double T = increasing_root(u, r_star > 0 ? r_star : small_start(u));
    return {T, X};
}

double effective_minimizer(const Channel& channel, const PotentialModel& model) {
    if (channel.gamma() == 0) return 0.0;
    auto du = [&](double r) { return effective_potential(channel, model, r, 1); };
    double lo = 1.0;
    while (du(lo) >= 0) lo *= 0.5;
    return increasing_root(du, lo);
}

double inner_turning_point(const Channel& channel, const PotentialModel& model, double lambda) {
    if (channel.gamma() == 0) return 0.0;
    const double r_star = effective_minimizer(channel, model);
    auto u = [&](double r) { return effective_value(channel, model, r) - lambda; };
    if (!(u(r_star) < 0)) throw ArgumentError("λ below min U");
    double lo = r_star;
    while (u(lo) <= 0) lo *= 0.5;
    return find_root(u, lo, r_star, 1e-14);
}

double action_integral(const PotentialModel& model, double lambda) {
    if (!(lambda > 0)) return 0.0;
    auto v = [&](double r) { return model.value(r) - lambda; };
    const double X = increasing_root(v, small_start(v));
    auto f = [&](double r) { return std::sqrt(std::max(0.0, lambda - model.value(r))); };
    return integrate_sqrt_singular(f, 0.0, X, SingularEnd::right) / std::numbers::pi;
}

double bs_residual(const EigenPair& pair, const Channel& channel, const PotentialModel& model) {
    return action_integral(model, pair.lambda) - (pair.level + 0.5 * channel.n() + 0.25 * channel.d());
}

PhaseZeta phase_and_zeta(const Channel& channel, const PotentialModel& model, double lambda, double r) {
    if (!(r > 0)) throw DomainError("phase_and_zeta: r must be > 0");
    const double T = turning_points(channel, model, lambda).T;
    const double inner = inner_turning_point(channel, model, lambda);
    PhaseZeta out{std::nullopt, 0.0};
    auto depth = [&](double x) {
        if (inner > 0 && x < 0.5 * (inner + T)) {
            const double mid = 0.5 * (inner + T);
            auto f = [&](double s) { return std::sqrt(std::max(0.0, lambda - effective_value(channel, model, s))); };
            return integrate_sqrt_singular(f, x, mid, SingularEnd::left, 1e-13) +
                   depth_to_turning_point(channel, model, lambda, T, mid, 1e-13);
        }
        return depth_to_turning_point(channel, model, lambda, T, x, 1e-13);
    };
    if (r < T) {
        if (r >= inner) out.zeta = -depth(r);
    } else if (r > T) {
        out.zeta = height_past_turning_point(channel, model, lambda, T, r, 1e-13);
    }
    if (inner <= 1.0 && 1.0 <= T && inner <= r && r <= T) out.S = depth(1.0) - (r < T ? depth(r) : 0.0);
    return out;
}

Interval allowed_interval(const Channel& channel, const PotentialModel& model, double lambda) {
    Interval out{};
    if (!allowed_set(channel, model, lambda, out)) {
        const double l0 = connectivity_threshold(channel, model);
        throw ThresholdError("allowed region empty or disconnected at this energy", l0);
    }
    return out;
}

double connectivity_threshold(const Channel& channel, const PotentialModel& model) {
    Interval tmp{};
    double hi = 1.0;
    for (int i = 0; !allowed_set(channel, model, hi, tmp); ++i) {
        if (i > 200) throw SearchError("allowed region never becomes connected");
        hi *= 2;
    }
    double lo = 0.0;
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (allowed_set(channel, model, mid, tmp) ? hi : lo) = mid;
    }
    return hi;
}

double lambda_zero(const SpectrumTable& table) {
    Interval tmp{};
    for (const auto& pair : table.pairs) {
        if (allowed_set(table.channel, table.model, pair.lambda, tmp)) return pair.lambda;
    }
    throw ThresholdError("no solved level has a connected allowed region",
                         connectivity_threshold(table.channel, table.model));
}

std::complex<double> amplitude_from_boundary(double lambda, double u_at_1, double du_at_1,
                                             double f_at_1, double fprime_at_1) {
    const double q = lambda - u_at_1;
    if (!(q > 0)) throw DomainError("r = 1 lies in the classically forbidden region");
    const double q4 = std::pow(q, 0.25);
    const double w0 = q4 * f_at_1;
    const double dw_dr = -0.25 * du_at_1 * f_at_1 / (q4 * q4 * q4) + q4 * fprime_at_1;
    const double w1 = dw_dr / std::sqrt(q);
    return {w0, -w1};
}

std::complex<double> extract_C_lambda(const EigenPair& pair, const Channel& channel,
                                      const PotentialModel& model) {
    return amplitude_from_boundary(pair.lambda, effective_potential(channel, model, 1.0),
                                   effective_potential(channel, model, 1.0, 1), pair.f_at_1,
                                   pair.fprime_at_1);
}

std::complex<double> rephase_amplitude(std::complex<double> c_lambda, double lambda) {
    return c_lambda * std::polar(1.0, -std::sqrt(lambda));
}

double allowed_region_residual(const EigenPair& pair, std::complex<double> c_lambda,
                               const SpectrumTable& table, Interval interval, PhaseConvention convention) {
    const double lambda = pair.lambda;
    const Interval omega = allowed_interval(table.channel, table.model, lambda);
    if (!(interval.a < interval.b) || !omega.contains(interval.a, interval.b)) {
        throw ArgumentError("residual interval is not inside the allowed region");
    }
    if (!(interval.a <= 1.0 && 1.0 <= interval.b)) throw ArgumentError("residual interval must contain r = 1");
    if (pair.samples.size() != table.grid.size()) throw ArgumentError("eigenpair does not live on the table grid");

    const auto& grid = table.grid;
    const auto idx = nodes_in(grid, interval.a, interval.b);
    const std::size_t i1 = grid.index_of(1.0);
    const double k = std::sqrt(lambda);
    const double scale = std::pow(lambda, 0.25);
    auto f = [&](double s) { return std::sqrt(lambda - effective_value(table.channel, table.model, s)); };

    std::vector<double> phase(grid.size(), 0.0);
    if (convention == PhaseConvention::exact) {
        for (std::size_t i = i1; i + 1 <= idx.back(); ++i) {
            phase[i + 1] = phase[i] + integrate_smooth(f, grid.r(i), grid.r(i + 1), 1e-13);
        }
        for (std::size_t i = i1; i > idx.front(); --i) {
            phase[i - 1] = phase[i] - integrate_smooth(f, grid.r(i - 1), grid.r(i), 1e-13);
        }
    } else {
        for (std::size_t i : idx) phase[i] = k * (grid.r(i) - 1.0);
    }

    double sup = 0;
    for (std::size_t i : idx) {
        const double model_value = std::real(c_lambda * std::polar(1.0, phase[i]));
        sup = std::max(sup, std::abs(scale * pair.samples[i] - model_value));
    }
    return sup;
}

LangerComparison langer_residual(const EigenPair& pair, const SpectrumTable& table) {
    const double lambda = pair.lambda;
    const auto& ch = table.channel;
    const auto& model = table.model;
    const double T = turning_points(ch, model, lambda).T;
    const Interval window{std::max(1.0, 0.5 * T), 0.98 * T};
    if (!(window.a < window.b)) throw ArgumentError("Langer window is empty at this energy");
    if (pair.samples.size() != table.grid.size()) throw ArgumentError("eigenpair does not live on the table grid");

    auto idx = nodes_in(table.grid, window.a, window.b);
    if (idx.size() < 8) throw ArgumentError("Langer window holds too few grid nodes");
    if (idx.size() > 400) {
        std::vector<std::size_t> thin;
        const double stride = static_cast<double>(idx.size() - 1) / 399.0;
        for (int k = 0; k < 400; ++k) thin.push_back(idx[static_cast<std::size_t>(std::llround(k * stride))]);
        idx = std::move(thin);
    }

    auto f = [&](double s) { return std::sqrt(std::max(0.0, lambda - effective_value(ch, model, s))); };
    std::vector<double> depth(idx.size());
    depth.back() = depth_to_turning_point(ch, model, lambda, T, table.grid.r(idx.back()));
    for (std::size_t k = idx.size() - 1; k-- > 0;) {
        depth[k] = depth[k + 1] + integrate_smooth(f, table.grid.r(idx[k]), table.grid.r(idx[k + 1]), 1e-13);
    }

    std::vector<double> eta(idx.size()), prof(idx.size());
    double num = 0, den = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const double r = table.grid.r(idx[k]);
        eta[k] = std::pow(lambda - effective_value(ch, model, r), 0.25) * pair.samples[idx[k]];
        prof[k] = langer_profile(depth[k]);
        num += eta[k] * prof[k];
        den += prof[k] * prof[k];
    }
    const double alpha = num / den;
    double sup = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) sup = std::max(sup, std::abs(eta[k] - alpha * prof[k]));
    return {sup / std::abs(alpha), alpha, window};
}

AppendixIntegral appendix_error_integral(const Channel& channel, const PotentialModel& model, double lambda,
                                         double epsilon, double band_halfwidth) {
    if (!(epsilon > 0 && epsilon <= 0.25)) throw ArgumentError("epsilon must lie in (0, 1/4]");
    if (!(effective_value(channel, model, 0.5) < lambda)) {
        throw ArgumentError("r = 1/2 is classically forbidden at this energy");
    }
    const double T = turning_points(channel, model, lambda).T;
    const double band = band_halfwidth > 0 ? band_halfwidth : 10 * 2 * std::numbers::pi / (200 * std::sqrt(lambda));
    const double r1 = (1 - epsilon) * T;
    const double r2 = (1 + epsilon) * T;
    if (!(r1 > 0.5) || !(band < epsilon * T)) throw ArgumentError("turning-point split is degenerate");

    auto weight_g = [&](double r, double zeta_sq) {
        const double q = lambda - effective_value(channel, model, r);
        const double u1 = effective_potential(channel, model, r, 1);
        const double u2 = effective_potential(channel, model, r, 2);
        const double curly = u2 / (4 * q * q) + 5 * u1 * u1 / (16 * q * q * q);
        const double g = 5.0 / (36.0 * zeta_sq) - curly;
        return std::abs(g) * std::sqrt(std::abs(q));
    };
    auto below = [&](double r) {
        const double a = depth_to_turning_point(channel, model, lambda, T, r, 1e-13);
        return weight_g(r, a * a);
    };
    auto above = [&](double r) {
        const double x = height_past_turning_point(channel, model, lambda, T, r, 1e-13);
        return weight_g(r, -x * x);
    };
    auto sqrt_allowed = [&](double s) { return std::sqrt(std::max(0.0, lambda - effective_value(channel, model, s))); };
    auto sqrt_forbidden = [&](double s) { return std::sqrt(std::max(0.0, effective_value(channel, model, s) - lambda)); };

    AppendixIntegral out;
    out.band_halfwidth = band;

    const double a_r1 = depth_to_turning_point(channel, model, lambda, T, r1, 1e-13);
    out.I1 = integrate_smooth(
        [&](double r) {
            const double a = a_r1 + integrate_smooth(sqrt_allowed, r, r1, 1e-13);
            return weight_g(r, a * a);
        },
        0.5, r1, 1e-8);

    try {
        out.I2 = integrate_smooth(below, r1, T - band, 1e-8) + integrate_smooth(above, T + band, r2, 1e-8);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("turning-point quadrature failed with excluded band halfwidth ") +
                             std::to_string(band) + ": " + e.what());
    }

    const double x_r2 = height_past_turning_point(channel, model, lambda, T, r2, 1e-13);
    out.I3 = integrate_smooth(
        [&](double u) {
            if (u <= 0) return 0.0;
            const double r = r2 / u;
            const double x = x_r2 + integrate_smooth(sqrt_forbidden, r2, r, 1e-13);
            return weight_g(r, -x * x) * r2 / (u * u);
        },
        0.0, 1.0, 1e-8);

    out.total = out.I1 + out.I2 + out.I3;
    out.band_estimate = 0.5 * (below(T - band) + above(T + band)) * 2 * band;
    return out;
}

WkbSummary summarize(const EigenPair& pair, const Channel& channel, const PotentialModel& model) {
    WkbSummary s;
    s.level = pair.level;
    s.lambda = pair.lambda;
    const auto tp = turning_points(channel, model, pair.lambda);
    s.T = tp.T;
    s.X = tp.X;
    s.action = action_integral(model, pair.lambda);
    s.bs_residual = s.action - (pair.level + 0.5 * channel.n() + 0.25 * channel.d());
    if (effective_value(channel, model, 1.0) < pair.lambda) {
        s.Z = depth_to_turning_point(channel, model, pair.lambda, s.T, 1.0, 1e-13);
        s.C_lambda = extract_C_lambda(pair, channel, model);
    } else {
        s.Z = nan_value;
        s.C_lambda = {nan_value, nan_value};
    }
    Interval omega{};
    if (allowed_set(channel, model, pair.lambda, omega)) s.allowed = omega;
    return s;
}

std::vector<WkbSummary> summarize(const SpectrumTable& table) {
    std::vector<WkbSummary> out;
    out.reserve(table.pairs.size());
    for (const auto& pair : table.pairs) out.push_back(summarize(pair, table.channel, table.model));
    return out;
}

PowerLawFit gap_scaling(const SpectrumTable& table, std::optional<IndexWindow> window) {
    if (table.pairs.size() < 20) throw ArgumentError("gap_scaling needs at least 20 levels");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t l = 0; l + 1 < table.pairs.size(); ++l) {
        pts.emplace_back(table.pairs[l].lambda, table.pairs[l + 1].lambda - table.pairs[l].lambda);
    }
    return fit_power_law(pts, window.value_or(top_half(pts.size())));
}

PowerLawFit amplitude_scaling(const std::vector<WkbSummary>& summaries, std::optional<IndexWindow> window) {
    if (summaries.size() < 20) throw ArgumentError("amplitude_scaling needs at least 20 summaries");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        if (i > 0 && !(summaries[i].lambda > summaries[i - 1].lambda)) {
            throw ArgumentError("amplitude_scaling needs increasing λ");
        }
        pts.emplace_back(summaries[i].lambda, std::abs(summaries[i].C_lambda));
    }
    return fit_power_law(pts, window.value_or(top_half(pts.size())));
}

}  // namespace specprobe
