#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "specprobe/eigensolve.hpp"
#include "specprobe/specfun.hpp"

namespace specprobe {

/// Smooth nonnegative bump exp(-1/(1-u^2)), u = (r - center)/halfwidth, sampled on a grid.
struct TestFunction {
    double center = 0;
    double halfwidth = 0;
    double a = 0;  ///< support start
    double b = 0;  ///< support end
    RadialGrid grid;
    std::vector<double> samples;
    double mass = 0;  ///< ∫ φ
    double norm = 0;  ///< ‖φ‖_{L²}
};

TestFunction make_bump(double center, double halfwidth, const RadialGrid& grid);

/// Gaussian spectral window κ̂(μ) = exp(-(σ μ)^2).
struct WindowSpec {
    double sigma = 1.0;

    double hat(double mu) const noexcept { return std::exp(-(sigma * mu) * (sigma * mu)); }
    double hat0() const noexcept { return 1.0; }
};

double window_hat(const WindowSpec& window, double mu);

/// ∫ e^{i r j} φ(r) f(r) dr by Simpson on the shared grid.
std::complex<double> overlap(const TestFunction& tf, double j, const EigenPair& pair);

/// conj(C) mass / (2 λ^{1/4}).
std::complex<double> predicted_overlap(std::complex<double> c_lambda, double lambda, double mass);

/// Σ_l κ̂(λ_l - τ) (φ_j, f_l) (ψ_{-k}, f_l), accumulated from the smallest window weight up.
std::complex<double> probe_G(const SpectrumTable& table, double tau, double j, double k,
                             const WindowSpec& window, const TestFunction& phi, const TestFunction& psi);

/// Σ_{l' != l} |κ̂(λ_{l'} - λ_l)|.
double isolation_check(const SpectrumTable& table, int l, const WindowSpec& window);

struct ProbePoint {
    int l = 0;
    double lambda = 0;
    double tau = 0;
    double j = 0;
    double k = 0;
    std::complex<double> G;
    double predicted_magnitude = 0;  ///< κ̂(0) |C_λ|^2 mass_φ mass_ψ / (4 sqrt(λ))
    double isolation = 0;
    std::complex<double> dominant;   ///< κ̂(0) (φ_j, f_l) (ψ_{-k}, f_l)
};

struct ProbeSequence {
    std::vector<ProbePoint> points;
    PowerLawFit fit;                 ///< log|G| against log λ
    double lower_bound_const = 0;    ///< min |G| (1 + τ + j + k)^{1/(2c)}
};

/// Probe along τ = λ_l, j = k = sqrt(λ_l) for l in [l_first, l_last].
ProbeSequence probe_sequence(const SpectrumTable& table, const TestFunction& phi, const TestFunction& psi,
                             const WindowSpec& window, int l_first, int l_last);

}  // namespace specprobe
