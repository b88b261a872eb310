#include "specprobe/eigensolve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "specprobe/errors.hpp"
#include "specprobe/specfun.hpp"
#include "specprobe/wkb.hpp"

namespace specprobe {

namespace {

constexpr double rescale_limit = 1e250;
constexpr double rescale_factor = 1e-250;

/// r^{nu+1/2} sum_k (-r^2 λ/4)^k / (k! (nu+1)_k): the free regular solution
/// divided by its leading coefficient, well scaled for any λ >= 0.
double regular_seed(double nu, double r, double lambda) {
    const double q = -0.25 * r * r * lambda;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::pow(r, nu + 0.5) * sum;
}

int sign_changes(const std::vector<double>& f, std::size_t first, std::size_t last) {
    int count = 0;
    int prev = 0;
    for (std::size_t i = first; i <= last && i < f.size(); ++i) {
        const int s = (f[i] > 0) - (f[i] < 0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

/// Numerov integration of f'' = (U - λ) f on the problem's grid.
class Shooter {
public:
    Shooter(const RadialProblem& problem, double lambda)
        : p_(problem), lambda_(lambda), c_(problem.grid().h * problem.grid().h / 12.0),
          n_(problem.grid().size()) {}

    double weight(std::size_t i) const { return 1.0 + c_ * (lambda_ - p_.effective()[i]); }
    double centre(std::size_t i) const { return 2.0 * (1.0 - 5.0 * c_ * (lambda_ - p_.effective()[i])); }

    /// First node from which the recurrence is well conditioned near the centrifugal wall.
    std::size_t start_index() const {
        const auto& u = p_.effective();
        std::size_t i = 0;
        while (i + 3 < n_ && c_ * (u[i] - lambda_) > 0.1) ++i;
        if (i > n_ / 4) throw ArgumentError("grid too coarse near the origin for this channel");
        return i;
    }

    /// Outward branch over the whole grid. Stores samples when `out` is given
    /// (rescaled consistently); returns the sign-change count over all nodes.
    int outward(std::vector<double>* out, std::size_t snap_index, double snap[3], int* zeros_to_snap) const {
        const auto& grid = p_.grid();
        const double nu = p_.channel().nu();
        const std::size_t i0 = start_index();
        std::vector<double> local;
        std::vector<double>& f = out ? *out : local;
        f.assign(n_, 0.0);
        for (std::size_t i = 0; i <= i0 + 1; ++i) f[i] = regular_seed(nu, grid.r(i), lambda_);

        int zeros = 0;
        int prev_sign = 0;
        auto track = [&](std::size_t i) {
            const int s = (f[i] > 0) - (f[i] < 0);
            if (s != 0) {
                if (prev_sign != 0 && s != prev_sign) ++zeros;
                prev_sign = s;
            }
            if (snap && i == snap_index + 1) {
                snap[0] = f[i - 2];
                snap[1] = f[i - 1];
                snap[2] = f[i];
                if (zeros_to_snap) *zeros_to_snap = sign_changes(f, 0, snap_index);
            }
        };
        for (std::size_t i = 0; i <= i0 + 1; ++i) track(i);

        std::size_t scaled_from = 0;
        for (std::size_t i = i0 + 1; i + 1 < n_; ++i) {
            f[i + 1] = (centre(i) * f[i] - weight(i - 1) * f[i - 1]) / weight(i + 1);
            if (std::abs(f[i + 1]) > rescale_limit) {
                for (std::size_t k = scaled_from; k <= i + 1; ++k) f[k] *= rescale_factor;
                // values that underflowed are irrelevant; later rescales only touch the active window
                scaled_from = i > 8 ? i - 8 : 0;
            }
            track(i + 1);
        }
        return zeros;
    }

    /// Inward branch from r_max with WKB-decaying data, down to node `stop`.
    void inward(std::vector<double>& g, std::size_t stop) const {
        const auto& grid = p_.grid();
        const std::size_t last = n_ - 1;
        g.assign(n_, 0.0);
        const double r_mid = grid.r(last) - 0.5 * grid.h;
        const double kappa = effective_potential(p_.channel(), p_.model(), r_mid) - lambda_;
        if (!(p_.effective()[last] > lambda_) || !(kappa > 0)) {
            throw ArgumentError("grid ends inside the classically allowed region");
        }
        g[last] = 1.0;
        g[last - 1] = std::exp(grid.h * std::sqrt(kappa));
        std::size_t scaled_to = last;
        for (std::size_t i = last - 1; i > stop; --i) {
            g[i - 1] = (centre(i) * g[i] - weight(i + 1) * g[i + 1]) / weight(i - 1);
            if (std::abs(g[i - 1]) > rescale_limit) {
                for (std::size_t k = i - 1; k <= scaled_to; ++k) g[k] *= rescale_factor;
                scaled_to = std::min(last, i + 8);
            }
        }
    }

private:
    const RadialProblem& p_;
    double lambda_;
    double c_;
    std::size_t n_;
};

std::size_t matching_index(const RadialProblem& problem, double lambda) {
    const auto tp = turning_points(problem.channel(), problem.model(), lambda);
    const auto& grid = problem.grid();
    if (!(tp.T > grid.r_min) || !(tp.T < grid.r_max)) {
        throw ArgumentError("matching point (outer turning point) lies outside the grid");
    }
    const std::size_t m = grid.index_of(tp.T);
    if (m < 3 || m + 3 >= grid.size()) throw ArgumentError("matching point too close to the grid ends");
    return m;
}

struct Matched {
    ShootResult result;
    std::vector<double> samples;  ///< glued solution (only when requested)
};

Matched shoot_at(const RadialProblem& problem, double lambda, std::size_t m, bool assemble) {
    const double h = problem.grid().h;
    Shooter shooter(problem, lambda);
    Matched out;
    double fo[3] = {0, 0, 0};
    int zeros_to_m = 0;
    std::vector<double> outward_samples;
    out.result.dirichlet_count =
        shooter.outward(assemble ? &outward_samples : nullptr, m, fo, &zeros_to_m);
    std::vector<double> g;
    shooter.inward(g, m - 1);
    const double fi[3] = {g[m - 1], g[m], g[m + 1]};

    const double k = std::sqrt(std::max(lambda, 1e-300));
    const double dfo = (fo[2] - fo[0]) / (2 * h);
    const double dfi = (fi[2] - fi[0]) / (2 * h);
    const double norm_o = std::hypot(fo[1], dfo / k);
    const double norm_i = std::hypot(fi[1], dfi / k);
    out.result.wronskian = (dfo * fi[1] - fo[1] * dfi) / (k * norm_o * norm_i);
    out.result.mismatch = dfo / fo[1] - dfi / fi[1];
    out.result.node_count = zeros_to_m;
    out.result.match_index = m;

    if (assemble) {
        out.samples = std::move(outward_samples);
        const double scale = fo[1] / fi[1];
        // the stored outward branch may carry a rescale factor relative to the snapshot
        const double glue = out.samples[m] / fo[1];
        for (std::size_t i = m + 1; i < out.samples.size(); ++i) out.samples[i] = g[i] * scale * glue;
        out.result.node_count = sign_changes(out.samples, 0, out.samples.size() - 1);
    }
    return out;
}

}  // namespace

std::size_t RadialGrid::index_of(double r) const noexcept {
    const double x = std::round((r - r_min) / h);
    if (!(x > 0)) return 0;
    return std::min(static_cast<std::size_t>(x), intervals);
}

std::vector<double> RadialGrid::nodes() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = r(i);
    return out;
}

RadialGrid build_grid(const Channel& channel, const PotentialModel& model, double lambda_max,
                      const GridOptions& opts) {
    if (opts.points_per_wavelength < 40) throw ArgumentError("need at least 40 points per wavelength");
    const double r_star = effective_minimizer(channel, model);
    const double u_min = r_star > 0 ? effective_potential(channel, model, r_star) : 0.0;
    if (!(lambda_max > u_min)) throw ArgumentError("lambda_max lies below the potential minimum");

    const double T = turning_points(channel, model, lambda_max).T;
    auto decay = [&](double r) {
        if (!(r > T)) return 0.0;
        return integrate_sqrt_singular(
            [&](double s) { return std::sqrt(std::max(0.0, effective_potential(channel, model, s) - lambda_max)); },
            T, r, SingularEnd::left);
    };
    double hi = T * 1.25;
    while (decay(hi) < opts.decay_margin) hi = T + 2 * (hi - T);
    const double r_decay = find_root([&](double r) { return decay(r) - opts.decay_margin; }, T, hi, 1e-12);

    RadialGrid grid;
    grid.r_min = std::min(opts.r_min_cap, 0.1 * std::pow(lambda_max, -0.25));
    const double h_target = 2 * std::numbers::pi / (opts.points_per_wavelength * std::sqrt(lambda_max));
    const double r_end = std::max(r_decay, 1.0 + 8 * h_target);

    auto steps_to_one = static_cast<std::size_t>(std::ceil((1.0 - grid.r_min) / h_target));
    for (;;) {
        grid.h = (1.0 - grid.r_min) / static_cast<double>(steps_to_one);
        grid.intervals = static_cast<std::size_t>(std::ceil((r_end - grid.r_min) / grid.h));
        grid.intervals += grid.intervals % 2;
        if (grid.intervals >= opts.min_intervals) break;
        steps_to_one *= (opts.min_intervals + grid.intervals - 1) / grid.intervals;
    }
    grid.r_max = grid.r(grid.intervals);
    return grid;
}

RadialProblem::RadialProblem(Channel channel, PotentialModel model, RadialGrid grid)
    : channel_(channel), model_(std::move(model)), grid_(grid) {
    if (!(grid_.r_min > 0) || !(grid_.h > 0) || grid_.intervals < 8) throw ArgumentError("invalid radial grid");
    u_.resize(grid_.size());
    for (std::size_t i = 0; i < u_.size(); ++i) u_[i] = effective_potential(channel_, model_, grid_.r(i));
    u_min_ = *std::min_element(u_.begin(), u_.end());
}

ShootResult shoot_mismatch(const RadialProblem& problem, double lambda) {
    return shoot_at(problem, lambda, matching_index(problem, lambda), false).result;
}

ShootResult shoot_mismatch(const Channel& channel, const PotentialModel& model, double lambda,
                           const RadialGrid& grid) {
    return shoot_mismatch(RadialProblem(channel, model, grid), lambda);
}

LevelEstimate estimate_level(const Channel& channel, const PotentialModel& model, int l) {
    if (l < 0) throw ArgumentError("level index must be >= 0");
    const double target = l + 0.5 * channel.n() + 0.25 * channel.d();
    double hi = 1.0;
    while (action_integral(model, hi) < target) hi *= 2;
    const double lambda =
        find_root([&](double x) { return action_integral(model, x) - target; }, 0.0, hi, 1e-12);
    const double dl = 1e-3 * lambda;
    const double slope = (action_integral(model, lambda + dl) - action_integral(model, lambda - dl)) / (2 * dl);
    return {lambda, 1.0 / slope};
}

EigenPair solve_level(const RadialProblem& problem, int l, const SolverOptions& opts) {
    if (l < 0) throw ArgumentError("level index must be >= 0");
    const auto est = estimate_level(problem.channel(), problem.model(), l);
    const double floor = problem.min_effective();
    const double tiny = 1e-12 * std::max(1.0, est.lambda);

    auto count = [&](double lambda) {
        return Shooter(problem, lambda).outward(nullptr, 0, nullptr, nullptr);
    };

    double width = opts.bracket_gaps * est.gap;
    double lo = std::max(floor + tiny, est.lambda - width);
    double hi = est.lambda + width;
    int n_lo = count(lo);
    int n_hi = count(hi);
    for (int iter = 0; n_lo > l; ++iter) {
        if (iter > 60 || lo <= floor + tiny) throw SearchError("no lower eigenvalue bracket for level " + std::to_string(l));
        hi = lo;
        n_hi = n_lo;
        lo = std::max(floor + tiny, lo - width);
        width *= 2;
        n_lo = count(lo);
    }
    for (int iter = 0; n_hi <= l; ++iter) {
        if (iter > 60) throw SearchError("no upper eigenvalue bracket for level " + std::to_string(l));
        lo = hi;
        n_lo = n_hi;
        hi += width;
        width *= 2;
        n_hi = count(hi);
    }
    // isolate the single eigenvalue: count(lo) == l and count(hi) == l + 1
    for (int iter = 0; (n_lo != l || n_hi != l + 1) && iter < 400; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const int n_mid = count(mid);
        if (n_mid <= l) {
            lo = mid;
            n_lo = n_mid;
        } else {
            hi = mid;
            n_hi = n_mid;
        }
    }
    if (n_lo != l || n_hi != l + 1) throw SearchError("could not isolate level " + std::to_string(l));

    const std::size_t m = matching_index(problem, 0.5 * (lo + hi));
    auto wronskian = [&](double lambda) { return shoot_at(problem, lambda, m, false).result.wronskian; };
    double lambda = 0;
    const double w_lo = wronskian(lo);
    const double w_hi = wronskian(hi);
    if ((w_lo > 0) != (w_hi > 0)) {
        lambda = find_root(wronskian, lo, hi, opts.rel_tol);
    } else {
        for (int iter = 0; iter < 200 && hi - lo > opts.rel_tol * hi; ++iter) {
            const double mid = 0.5 * (lo + hi);
            (count(mid) <= l ? lo : hi) = mid;
        }
        lambda = 0.5 * (lo + hi);
    }

    auto matched = shoot_at(problem, lambda, m, true);
    auto& f = matched.samples;
    const auto& grid = problem.grid();
    std::vector<double> sq(f.size());
    std::transform(f.begin(), f.end(), sq.begin(), [](double v) { return v * v; });
    const double norm = std::sqrt(simpson(sq, grid.h));
    if (!(norm > 0) || !std::isfinite(norm)) throw NumericalError("eigenfunction normalisation failed");
    for (auto& v : f) v /= norm;
    std::transform(f.begin(), f.end(), sq.begin(), [](double v) { return v * v; });

    EigenPair pair;
    pair.level = l;
    pair.lambda = lambda;
    pair.node_count = sign_changes(f, 0, f.size() - 1);
    pair.norm_check = simpson(sq, grid.h);
    const std::size_t i1 = grid.index_of(1.0);
    pair.f_at_1 = f[i1];
    pair.fprime_at_1 = five_point_derivative(f, i1, grid.h);
    pair.samples = std::move(f);
    if (pair.node_count != l) {
        throw ConsistencyError("level " + std::to_string(l) + " converged with " +
                               std::to_string(pair.node_count) + " nodes");
    }
    return pair;
}

EigenPair solve_level(const Channel& channel, const PotentialModel& model, int l, const SolverOptions& opts) {
    const auto est = estimate_level(channel, model, l);
    const double top = opts.energy_margin * (est.lambda + (opts.bracket_gaps + 1) * est.gap);
    RadialProblem problem(channel, model, build_grid(channel, model, top, opts.grid));
    return solve_level(problem, l, opts);
}

SpectrumTable solve_spectrum(const Channel& channel, const PotentialModel& model, int l_max,
                             const SolverOptions& opts) {
    if (l_max < 0) throw ArgumentError("l_max must be >= 0");
    const auto est = estimate_level(channel, model, l_max);
    const double top = opts.energy_margin * (est.lambda + (opts.bracket_gaps + 1) * est.gap);
    const RadialProblem problem(channel, model, build_grid(channel, model, top, opts.grid));

    const auto levels = static_cast<std::size_t>(l_max) + 1;
    std::vector<EigenPair> pairs(levels);
    std::vector<std::exception_ptr> errors(levels);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t l = next++; l < levels; l = next++) {
            try {
                pairs[l] = solve_level(problem, static_cast<int>(l), opts);
            } catch (...) {
                errors[l] = std::current_exception();
            }
        }
    };
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, levels));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (std::size_t l = 0; l < levels; ++l) {
        if (!errors[l]) continue;
        const std::string where = "level " + std::to_string(l) + ": ";
        try {
            std::rethrow_exception(errors[l]);
        } catch (const SearchError& e) {
            throw SearchError(where + e.what());
        } catch (const ConsistencyError& e) {
            throw ConsistencyError(where + e.what());
        } catch (const NumericalError& e) {
            throw NumericalError(where + e.what());
        } catch (const ArgumentError& e) {
            throw ArgumentError(where + e.what());
        }
    }
    for (std::size_t l = 1; l < levels; ++l) {
        if (!(pairs[l].lambda > pairs[l - 1].lambda)) {
            throw ConsistencyError("eigenvalues not strictly increasing at level " + std::to_string(l));
        }
    }
    return SpectrumTable{channel, model, problem.grid(), opts, std::move(pairs)};
}

double boundary_series_small_r(const Channel& channel, double lambda, double r) {
    if (!(r > 0)) throw DomainError("boundary_series_small_r: r must be > 0");
    if (!(lambda > 0)) throw DomainError("boundary_series_small_r: λ must be > 0");
    return std::sqrt(r) * bessel_j(channel.nu(), r * std::sqrt(lambda));
}

double regular_coefficient(const Channel& channel, double lambda) {
    const double nu = channel.nu();
    return std::exp(nu * std::log(0.5 * std::sqrt(lambda)) - std::lgamma(nu + 1));
}

double five_point_derivative(const std::vector<double>& f, std::size_t i, double h) {
    if (i < 2 || i + 2 >= f.size()) throw ArgumentError("five-point stencil leaves the grid");
    return (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
}

double eigen_residual(const RadialProblem& problem, const EigenPair& pair) {
    const auto& f = pair.samples;
    const auto& u = problem.effective();
    const double h = problem.grid().h;
    if (f.size() != u.size()) throw ArgumentError("eigenpair does not live on this grid");
    double res = 0;
    double norm = 0;
    for (std::size_t i = 2; i + 2 < f.size(); ++i) {
        const double d2 = (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]) / (12 * h * h);
        const double r = -d2 + (u[i] - pair.lambda) * f[i];
        res += r * r;
        norm += f[i] * f[i];
    }
    return std::sqrt(res / norm);
}

double sample_at(const std::vector<double>& samples, const RadialGrid& grid, double r) {
    if (!(r > 0)) throw DomainError("sample_at: r must be > 0");
    if (samples.size() != grid.size()) throw ArgumentError("samples do not match the grid");
    if (r < grid.r_min) throw ArgumentError("sample_at: r below the grid start");
    if (r > grid.r_max) return 0.0;
    const double x = (r - grid.r_min) / grid.h;
    const double nearest = std::round(x);
    if (std::abs(x - nearest) < 1e-9) return samples[static_cast<std::size_t>(nearest)];
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    auto base = static_cast<std::ptrdiff_t>(std::floor(x)) - 1;
    base = std::clamp<std::ptrdiff_t>(base, 0, n - 4);
    double value = 0;
    for (std::ptrdiff_t j = 0; j < 4; ++j) {
        double w = 1;
        for (std::ptrdiff_t k = 0; k < 4; ++k) {
            if (k != j) w *= (x - static_cast<double>(base + k)) / static_cast<double>(j - k);
        }
        value += w * samples[static_cast<std::size_t>(base + j)];
    }
    return value;
}

}  // namespace specprobe
