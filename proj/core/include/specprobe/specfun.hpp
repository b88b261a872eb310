#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace specprobe {

/// Bessel function of the first kind J_nu(x), nu >= 0, x >= 0.
///
/// Ascending series (extended precision) below max(17, 2 nu); above it the
/// Hankel asymptotic expansion for the fractional orders nu - floor(nu) and
/// nu - floor(nu) + 1, followed by upward recurrence (stable since nu < x).
double bessel_j(double nu, double x);

/// Same as bessel_j but also accepts non-integer orders in (-1, 0).
double bessel_j_real_order(double nu, double x);

/// sqrt(pi z / 6) (J_{1/3}(z) + J_{-1/3}(z)); tends to cos(z - pi/4) as z -> oo.
double langer_profile(double z);

enum class SingularEnd { none, left, right };

/// Integral of f over [a, b] where f may behave like sqrt(distance) at the
/// flagged end. The flagged end is removed by x = end -/+ (b - a) t^2, after
/// which adaptive composite Gauss-Legendre handles the smooth remainder.
double integrate_sqrt_singular(const std::function<double(double)>& f, double a, double b,
                               SingularEnd singular_end, double rel_tol = 1e-13);

/// Adaptive Gauss-Legendre on [a, b] for smooth integrands.
double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-13);

/// Composite Simpson on uniformly spaced samples (odd count).
double simpson(std::span<const double> samples, double h);

struct IndexWindow {
    std::size_t first = 0;
    std::size_t last = 0;  ///< one past the final index
};

struct PowerLawFit {
    double exponent = 0;
    double log_intercept = 0;
    double r_squared = 0;
    IndexWindow window;
    double x_min = 0;
    double x_max = 0;
    std::size_t count = 0;

    double predict(double x) const;
};

/// Least-squares line through (log x, log y) restricted to `window`.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points, IndexWindow window);
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

/// The upper half [size/2, size) of an index range.
IndexWindow top_half(std::size_t size);

/// Root of f in [lo, hi] (f(lo), f(hi) of opposite sign) to relative width rel_tol.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-15, int max_iter = 200);

}  // namespace specprobe
