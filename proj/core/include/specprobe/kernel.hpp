#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "specprobe/eigensolve.hpp"

namespace specprobe {

/// Dimension of degree-n spherical harmonics on S^{d-1}.
std::int64_t sphere_dim(int d, int n);

/// K_L(t, r, s) = Σ_{l <= L} e^{-i λ_l t} f_l(r) f_l(s).
std::complex<double> channel_kernel(const SpectrumTable& table, double t, double r, double s, int L);

/// (r s)^{-(d-1)/2} K_L(t, r, s).
std::complex<double> weighted_kernel(const SpectrumTable& table, double t, double r, double s, int L);

struct ChannelKernelGrid {
    Channel channel;
    std::vector<double> t;
    std::vector<double> r;
    std::vector<double> s;
    int L = 0;
    std::vector<std::complex<double>> values;  ///< index (it * r.size() + ir) * s.size() + is

    const std::complex<double>& at(std::size_t it, std::size_t ir, std::size_t is) const {
        return values[(it * r.size() + ir) * s.size() + is];
    }
};

ChannelKernelGrid kernel_grid(const SpectrumTable& table, const std::vector<double>& t,
                              const std::vector<double>& r, const std::vector<double>& s, int L);

/// Writes t,r,s,reK,imK,weighted_reK,weighted_imK rows, t-major then r then s.
void export_kernel_grid(const SpectrumTable& table, const std::vector<double>& t, const std::vector<double>& r,
                        const std::vector<double>& s, int L, const std::filesystem::path& path);

struct KernelRow {
    double t, r, s, re, im, weighted_re, weighted_im;
};

std::vector<KernelRow> read_kernel_csv(const std::filesystem::path& path);

/// ∫∫ |K_L(0, r, s)|^2 dr ds, evaluated through the Gram matrix of the samples.
double parseval(const SpectrumTable& table, int L);

/// |<K_L(0), K_L(t)>| / ‖K_L(0)‖^2 in L²(dr ds); 1 at t = 0.
double kernel_autocorrelation(const SpectrumTable& table, int L, double t);

/// a, a + step, ... up to b (inclusive within rounding).
std::vector<double> linspace_step(double a, double b, double step);

}  // namespace specprobe
