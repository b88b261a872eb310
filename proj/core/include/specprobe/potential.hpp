#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace specprobe {

/// One term coeff * r^exponent of a radial potential.
struct PowerTerm {
    double coeff;
    int exponent;
};

/// Radial profile V(r) of a spherically symmetric potential, built from
/// positive even powers of r so that V(|x|) is smooth on R^d.
///
/// The growth index c is min(exponent)/2; for every term r V' >= 2 c V holds
/// identically. A single r^2 term is accepted only behind the harmonic flag and
/// is meant for solver calibration (its spectrum is known in closed form).
class PotentialModel {
public:
    explicit PotentialModel(std::vector<PowerTerm> terms, double threshold = 1.0,
                            bool allow_harmonic = false);

    /// Parses "coeff*r^exp" terms joined by '+', e.g. "1*r^4+0.5*r^6".
    static PotentialModel parse(std::string_view spec, bool allow_harmonic = false,
                                double threshold = 1.0);

    static PotentialModel quartic() { return PotentialModel({{1.0, 4}}); }
    static PotentialModel sextic() { return PotentialModel({{1.0, 6}}); }
    static PotentialModel harmonic() { return PotentialModel({{1.0, 2}}, 1.0, true); }

    double value(double r) const { return derivative(r, 0); }
    double derivative(double r, int order) const;

    const std::vector<PowerTerm>& terms() const noexcept { return terms_; }
    double growth_index() const noexcept { return growth_index_; }
    double threshold() const noexcept { return threshold_; }
    bool is_harmonic() const noexcept { return harmonic_; }

    /// Canonical model string; parse(id()) reproduces the model.
    std::string id() const;

private:
    std::vector<PowerTerm> terms_;
    double growth_index_;
    double threshold_;
    bool harmonic_;
};

/// Angular channel (d, n) of the partial-wave decomposition.
class Channel {
public:
    Channel(int d, int n);

    int d() const noexcept { return d_; }
    int n() const noexcept { return n_; }

    /// Coefficient of 1/r^2 in the effective potential: (d-1)(d-3)/4 + n(n+d-2).
    double gamma() const noexcept { return gamma_; }
    /// Bessel order of the free regular solution: n + (d-2)/2.
    double nu() const noexcept { return n_ + 0.5 * (d_ - 2); }
    /// Leading small-r power of the regular solution: n + (d-1)/2.
    double regular_exponent() const noexcept { return n_ + 0.5 * (d_ - 1); }

    friend bool operator==(const Channel&, const Channel&) = default;

private:
    int d_;
    int n_;
    double gamma_;
};

/// V^{(order)}(r) for order in 0..3.
double eval_potential(const PotentialModel& model, double r, int order);

struct AssumptionReport {
    bool convex = false;         ///< V'' > 0 on every sample
    bool growth = false;         ///< r V' >= 2 c V > 0 with the model's c
    bool superquadratic = false; ///< max admissible c > 1
    bool bounded_ratios = false; ///< r |V^(j)| / |V^(j-1)| finite and below ratio_bound
    double max_admissible_c = 0; ///< inf over samples of r V' / (2 V)
    double min_convexity = 0;    ///< min over samples of V''
    double worst_growth_margin = 0; ///< min over samples of r V' - 2 c V
    double worst_ratio[3] = {0, 0, 0}; ///< sup of r |V^(j)| / |V^(j-1)|, j = 1..3

    bool pass() const noexcept { return convex && growth && superquadratic && bounded_ratios; }
};

/// Samples the structural hypotheses on [r_lo, r_hi] (log-spaced). Failures
/// are reported in the result, never thrown.
AssumptionReport validate_assumptions(const PotentialModel& model, double r_lo, double r_hi,
                                      int samples, double ratio_bound = 1e3);

/// U_{d,n}(r) = gamma / r^2 + V(r), and its derivatives up to order 3.
double effective_potential(const Channel& channel, const PotentialModel& model, double r,
                           int order = 0);

}  // namespace specprobe
