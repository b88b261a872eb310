#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "specprobe/potential.hpp"

namespace specprobe {

struct GridOptions {
    double points_per_wavelength = 200;  ///< at least 40; sets h from the top energy
    double decay_margin = 35;            ///< required ∫_T^{r_max} sqrt(U - λ_max)
    double r_min_cap = 1e-3;
    std::size_t min_intervals = 1000;
};

/// Uniform radial grid r_i = r_min + i h, i = 0..intervals. The interval
/// count is even (Simpson) and r = 1 is always a grid node.
struct RadialGrid {
    double r_min = 0;
    double r_max = 0;
    double h = 0;
    std::size_t intervals = 0;

    std::size_t size() const noexcept { return intervals + 1; }
    double r(std::size_t i) const noexcept { return r_min + static_cast<double>(i) * h; }
    /// Nearest node to r (clamped to the grid).
    std::size_t index_of(double r) const noexcept;
    std::vector<double> nodes() const;

    friend bool operator==(const RadialGrid&, const RadialGrid&) = default;
};

RadialGrid build_grid(const Channel& channel, const PotentialModel& model, double lambda_max,
                      const GridOptions& opts = {});

/// The half-line eigenproblem -f'' + U f = λ f on a fixed grid; caches U at the nodes.
class RadialProblem {
public:
    RadialProblem(Channel channel, PotentialModel model, RadialGrid grid);

    const Channel& channel() const noexcept { return channel_; }
    const PotentialModel& model() const noexcept { return model_; }
    const RadialGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& effective() const noexcept { return u_; }
    double min_effective() const noexcept { return u_min_; }

private:
    Channel channel_;
    PotentialModel model_;
    RadialGrid grid_;
    std::vector<double> u_;
    double u_min_;
};

struct ShootResult {
    double mismatch = 0;     ///< f'/f (outward) - f'/f (inward) at the matching node
    double wronskian = 0;    ///< scale-free Wronskian of the two branches; changes sign at eigenvalues
    int node_count = 0;      ///< sign changes of the matched solution (outward branch up to the match)
    int dirichlet_count = 0; ///< sign changes of the outward solution over the whole grid
    std::size_t match_index = 0;
};

ShootResult shoot_mismatch(const RadialProblem& problem, double lambda);
ShootResult shoot_mismatch(const Channel& channel, const PotentialModel& model, double lambda,
                           const RadialGrid& grid);

struct EigenPair {
    int level = 0;
    double lambda = 0;
    std::vector<double> samples;
    int node_count = 0;
    double f_at_1 = 0;
    double fprime_at_1 = 0;
    double norm_check = 0;
};

struct SolverOptions {
    GridOptions grid;
    double rel_tol = 1e-13;     ///< eigenvalue refinement tolerance
    double bracket_gaps = 3;    ///< initial half-width in units of the local mean gap
    double energy_margin = 1.1; ///< grid built for margin * (top level estimate + bracket)
    unsigned threads = 0;       ///< 0 = hardware concurrency

    friend bool operator==(const SolverOptions& a, const SolverOptions& b) {
        return a.grid.points_per_wavelength == b.grid.points_per_wavelength &&
               a.grid.decay_margin == b.grid.decay_margin && a.grid.r_min_cap == b.grid.r_min_cap &&
               a.grid.min_intervals == b.grid.min_intervals && a.rel_tol == b.rel_tol &&
               a.bracket_gaps == b.bracket_gaps && a.energy_margin == b.energy_margin;
    }
};

struct SpectrumTable {
    Channel channel;
    PotentialModel model;
    RadialGrid grid;
    SolverOptions tolerances;
    std::vector<EigenPair> pairs;  ///< level l at index l

    std::string model_id() const { return model.id(); }
    int l_max() const noexcept { return static_cast<int>(pairs.size()) - 1; }
};

/// Inverse quantization estimate: λ with action(λ) = l + n/2 + d/4, and the local mean gap.
struct LevelEstimate {
    double lambda;
    double gap;
};
LevelEstimate estimate_level(const Channel& channel, const PotentialModel& model, int l);

EigenPair solve_level(const RadialProblem& problem, int l, const SolverOptions& opts = {});
EigenPair solve_level(const Channel& channel, const PotentialModel& model, int l,
                      const SolverOptions& opts = {});

SpectrumTable solve_spectrum(const Channel& channel, const PotentialModel& model, int l_max,
                             const SolverOptions& opts = {});

/// Free regular solution r^{1/2} J_nu(r sqrt(λ)) with nu = n + (d-2)/2.
double boundary_series_small_r(const Channel& channel, double lambda, double r);
/// Leading coefficient of the free regular solution: (sqrt(λ)/2)^nu / Gamma(n + d/2).
double regular_coefficient(const Channel& channel, double lambda);

/// ‖-f'' + (U - λ) f‖ / ‖f‖ over interior nodes, with 5-point second differences.
double eigen_residual(const RadialProblem& problem, const EigenPair& pair);

/// Five-point first derivative of samples at node i.
double five_point_derivative(const std::vector<double>& f, std::size_t i, double h);

/// Cubic Lagrange interpolation of grid samples; zero beyond r_max.
double sample_at(const std::vector<double>& samples, const RadialGrid& grid, double r);

}  // namespace specprobe
