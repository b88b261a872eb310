#include "specprobe/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "specprobe/errors.hpp"

namespace specprobe {

namespace {

constexpr double pi = std::numbers::pi;

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& nodes = rule::abscissa();
    const auto& weights = rule::weights();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == 0.0) {
            const double v = f(mid);
            if (!std::isfinite(v)) throw NumericalError("non-finite integrand sample");
            sum += weights[i] * v;
            continue;
        }
        const double lo = f(mid - half * nodes[i]);
        const double hi = f(mid + half * nodes[i]);
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw NumericalError("non-finite integrand sample");
        sum += weights[i] * (lo + hi);
    }
    return sum * half;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    constexpr int initial_panels = 8;
    struct Panel {
        double lo, hi, value;
        int depth;
    };
    std::vector<Panel> stack;
    const double width = (b - a) / initial_panels;
    double scale = 0.0;
    for (int i = 0; i < initial_panels; ++i) {
        const double lo = a + i * width;
        const double hi = i + 1 == initial_panels ? b : lo + width;
        const double v = gauss_legendre(f, lo, hi);
        scale += std::abs(v);
        stack.push_back({lo, hi, v, 0});
    }
    scale = std::max(scale, std::numeric_limits<double>::min());
    const double total_width = std::abs(b - a);

    double result = 0.0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.lo + p.hi);
        const double left = gauss_legendre(f, p.lo, mid);
        const double right = gauss_legendre(f, mid, p.hi);
        const double refined = left + right;
        const double share = std::abs(p.hi - p.lo) / total_width;
        const double err = std::abs(refined - p.value);
        if (err <= rel_tol * scale * share || err <= 1e-15 * std::abs(refined)) {
            result += refined;
            continue;
        }
        if (p.depth >= 40) {
            if (err > 1e-9 * scale * share) throw NumericalError("adaptive quadrature did not converge");
            result += refined;
            continue;
        }
        stack.push_back({p.lo, mid, left, p.depth + 1});
        stack.push_back({mid, p.hi, right, p.depth + 1});
    }
    return result;
}

}  // namespace

double bessel_j_real_order(double nu, double x) {
    if (!(x >= 0)) throw DomainError("bessel_j: x must be >= 0");
    if (!(nu > -1)) throw ArgumentError("bessel_j: order must exceed -1");
    if (x == 0) {
        if (nu == 0) return 1.0;
        if (nu > 0) return 0.0;
        throw DomainError("bessel_j: negative order is singular at x = 0");
    }
    try {
        return boost::math::cyl_bessel_j(nu, x);
    } catch (const std::exception& e) {
        throw NumericalError(std::string("bessel_j: ") + e.what());
    }
}

double bessel_j(double nu, double x) {
    if (!(x >= 0)) throw DomainError("bessel_j: x must be >= 0");
    if (!(nu >= 0)) throw ArgumentError("bessel_j: order must be >= 0");
    return bessel_j_real_order(nu, x);
}

double langer_profile(double z) {
    if (!(z > 0)) throw DomainError("langer_profile: z must be > 0");
    return std::sqrt(pi * z / 6.0) * (bessel_j_real_order(1.0 / 3.0, z) + bessel_j_real_order(-1.0 / 3.0, z));
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (!(a <= b)) throw ArgumentError("integrate: need a <= b");
    return adaptive(f, a, b, rel_tol);
}

double integrate_sqrt_singular(const std::function<double(double)>& f, double a, double b,
                               SingularEnd singular_end, double rel_tol) {
    if (!(a < b)) throw ArgumentError("integrate_sqrt_singular: need a < b");
    const double len = b - a;
    switch (singular_end) {
    case SingularEnd::none:
        return adaptive(f, a, b, rel_tol);
    case SingularEnd::right:
        return adaptive([&](double t) { return t == 0 ? 0.0 : f(b - len * t * t) * 2 * len * t; },
                        0.0, 1.0, rel_tol);
    case SingularEnd::left:
        return adaptive([&](double t) { return t == 0 ? 0.0 : f(a + len * t * t) * 2 * len * t; },
                        0.0, 1.0, rel_tol);
    }
    return 0.0;
}

double simpson(std::span<const double> samples, double h) {
    const std::size_t n = samples.size();
    if (n < 3 || n % 2 == 0) throw ArgumentError("simpson: need an odd number (>= 3) of samples");
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) (i % 2 ? odd : even) += samples[i];
    return h / 3.0 * (samples.front() + samples.back() + 4.0 * odd + 2.0 * even);
}

double PowerLawFit::predict(double x) const { return std::exp(log_intercept) * std::pow(x, exponent); }

IndexWindow top_half(std::size_t size) { return {size / 2, size}; }

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points, IndexWindow window) {
    if (window.last > points.size() || window.first > window.last) {
        throw ArgumentError("fit_power_law: window outside point range");
    }
    const std::size_t m = window.last - window.first;
    if (m < 5) throw ArgumentError("fit_power_law: need at least 5 points");

    std::vector<double> lx(m), ly(m);
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    for (std::size_t i = 0; i < m; ++i) {
        const auto [x, y] = points[window.first + i];
        if (!(x > 0) || !(y > 0)) throw DomainError("fit_power_law: points must be positive");
        lx[i] = std::log(x);
        ly[i] = std::log(y);
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
    }
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    long double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const long double dx = lx[i] - mx;
        const long double dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) throw ArgumentError("fit_power_law: abscissae must not all coincide");

    PowerLawFit fit;
    fit.exponent = static_cast<double>(sxy / sxx);
    fit.log_intercept = static_cast<double>(my - sxy / sxx * mx);
    double r2 = 1.0;
    if (syy > 0) {
        long double ss_res = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const long double e = ly[i] - (fit.log_intercept + fit.exponent * lx[i]);
            ss_res += e * e;
        }
        r2 = static_cast<double>(1.0L - ss_res / syy);
    }
    fit.r_squared = std::clamp(r2, 0.0, 1.0);
    fit.window = window;
    fit.x_min = x_min;
    fit.x_max = x_max;
    fit.count = m;
    return fit;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
    return fit_power_law(points, IndexWindow{0, points.size()});
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                 int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0)) throw NumericalError("find_root: no sign change in bracket");
    const int bits = std::clamp(static_cast<int>(-std::log2(rel_tol)), 8, 52);
    boost::math::tools::eps_tolerance<double> tol(bits);
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (a + b);
}

}  // namespace specprobe
