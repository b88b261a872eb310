#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "specprobe/eigensolve.hpp"
#include "specprobe/potential.hpp"
#include "specprobe/specfun.hpp"

namespace specprobe {

struct TurningPoints {
    double T;  ///< outer root of U_{d,n}(T) = λ
    double X;  ///< root of V(X) = λ
};

TurningPoints turning_points(const Channel& channel, const PotentialModel& model, double lambda);

/// Minimiser of the (convex) effective potential; 0 when gamma = 0.
double effective_minimizer(const Channel& channel, const PotentialModel& model);
/// Inner root of U = λ (0 when gamma = 0).
double inner_turning_point(const Channel& channel, const PotentialModel& model, double lambda);

/// (1/π) ∫_0^X sqrt(λ - V(r)) dr.
double action_integral(const PotentialModel& model, double lambda);

/// action(λ_l) - (l + n/2 + d/4).
double bs_residual(const EigenPair& pair, const Channel& channel, const PotentialModel& model);

struct PhaseZeta {
    std::optional<double> S;  ///< ∫_1^r sqrt(λ - U); empty outside the allowed region
    double zeta;              ///< -|ζ| for r < T, ξ with ζ = iξ for r > T, 0 at T
};

PhaseZeta phase_and_zeta(const Channel& channel, const PotentialModel& model, double lambda, double r);

struct Interval {
    double a;
    double b;
    bool contains(double lo, double hi) const noexcept { return a <= lo && hi <= b; }
};

/// Ω_λ = {r >= λ^{-1/4} : U(r) <= λ/2}; throws ThresholdError if empty or disconnected.
Interval allowed_interval(const Channel& channel, const PotentialModel& model, double lambda);

/// Smallest λ for which Ω_λ is a nonempty interval (bisection on the connectivity predicate).
double connectivity_threshold(const Channel& channel, const PotentialModel& model);

/// Smallest eigenvalue of the table whose Ω_λ is connected.
double lambda_zero(const SpectrumTable& table);

/// C_λ = w(0) - i w'(0) from boundary data at r = 1.
std::complex<double> amplitude_from_boundary(double lambda, double u_at_1, double du_at_1,
                                             double f_at_1, double fprime_at_1);

std::complex<double> extract_C_lambda(const EigenPair& pair, const Channel& channel,
                                      const PotentialModel& model);

/// C_λ e^{-i sqrt(λ)}: the amplitude in the convention f ≈ λ^{-1/4} Re{C e^{i sqrt(λ) r}}.
std::complex<double> rephase_amplitude(std::complex<double> c_lambda, double lambda);

enum class PhaseConvention { exact, linear };

/// sup over nodes in I of |λ^{1/4} f(r) - Re{C e^{iS(r)}}| (exact), or with
/// S(r) replaced by sqrt(λ) (r - 1) (linear).
double allowed_region_residual(const EigenPair& pair, std::complex<double> c_lambda,
                               const SpectrumTable& table, Interval interval,
                               PhaseConvention convention = PhaseConvention::exact);

struct LangerComparison {
    double residual;  ///< sup |a^{-1} f - α P(-ζ)| / |α|
    double alpha;
    Interval window;
};

LangerComparison langer_residual(const EigenPair& pair, const SpectrumTable& table);

struct AppendixIntegral {
    double I1 = 0;
    double I2 = 0;
    double I3 = 0;
    double total = 0;
    double band_halfwidth = 0; ///< excluded |r - T| < band_halfwidth
    double band_estimate = 0;  ///< |g| sqrt|λ-U| at the band edges times the band width
};

/// ∫_{1/2}^∞ |g(ζ(r))| |λ - U|^{1/2} dr split at (1 ± ε) T.
/// band_halfwidth <= 0 selects 10 h with h = 2π / (200 sqrt(λ)).
AppendixIntegral appendix_error_integral(const Channel& channel, const PotentialModel& model,
                                         double lambda, double epsilon, double band_halfwidth = 0);

struct WkbSummary {
    int level = 0;
    double lambda = 0;
    double T = 0;
    double X = 0;
    double Z = 0;
    double action = 0;
    double bs_residual = 0;
    std::complex<double> C_lambda;
    std::optional<Interval> allowed;
};

WkbSummary summarize(const EigenPair& pair, const Channel& channel, const PotentialModel& model);
std::vector<WkbSummary> summarize(const SpectrumTable& table);

/// Fit of log(λ_{l+1} - λ_l) against log λ_l; default window is the top half of the gaps.
PowerLawFit gap_scaling(const SpectrumTable& table, std::optional<IndexWindow> window = {});

/// Fit of log|C_λ| against log λ; default window is the top half.
PowerLawFit amplitude_scaling(const std::vector<WkbSummary>& summaries,
                              std::optional<IndexWindow> window = {});

}  // namespace specprobe
