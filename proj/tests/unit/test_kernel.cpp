#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "fixtures.hpp"
#include "specprobe/csv.hpp"
#include "specprobe/errors.hpp"
#include "specprobe/kernel.hpp"

using namespace specprobe;
namespace fs = std::filesystem;

TEST_SUITE("kernel") {

TEST_CASE("harmonic polynomial dimensions") {
    CHECK(sphere_dim(3, 0) == 1);
    CHECK(sphere_dim(3, 2) == 5);
    CHECK(sphere_dim(4, 3) == 16);
    for (int n = 0; n < 12; ++n) CHECK(sphere_dim(3, n) == 2 * n + 1);
    for (int n = 0; n < 12; ++n) CHECK(sphere_dim(4, n) == (n + 1) * (n + 1));
    CHECK_THROWS_AS((void)sphere_dim(2, 1), ArgumentError);
    CHECK_THROWS_AS((void)sphere_dim(3, -1), ArgumentError);
}

TEST_CASE("kernel symmetries") {
    const auto& q = fixtures::quartic();
    for (double r : {0.5, 1.0, 1.7}) {
        for (double s : {0.6, 1.0, 2.2}) {
            for (double t : {0.0, 0.3, 2.0}) {
                const auto k = channel_kernel(q, t, r, s, 20);
                CHECK(std::abs(k - channel_kernel(q, t, s, r, 20)) <= 1e-12 * (1 + std::abs(k)));
                CHECK(std::abs(channel_kernel(q, -t, r, s, 20) - std::conj(k)) <= 1e-12 * (1 + std::abs(k)));
            }
            CHECK(channel_kernel(q, 0, r, s, 20).imag() == 0.0);
        }
        CHECK(channel_kernel(q, 0, r, r, 20).real() >= 0);
        for (int L = 0; L < 20; ++L) CHECK(channel_kernel(q, 0, r, r, L + 1).real() >= channel_kernel(q, 0, r, r, L).real());
        const double base = std::abs(channel_kernel(q, 0, r, 1.3, 0));
        for (double t : {0.4, 5.0, 17.0}) CHECK(std::abs(channel_kernel(q, t, r, 1.3, 0)) == doctest::Approx(base).epsilon(1e-14));
    }
    CHECK(weighted_kernel(q, 0.5, 1.0, 2.0, 5) == channel_kernel(q, 0.5, 1.0, 2.0, 5) / 2.0);
    CHECK_THROWS_AS((void)channel_kernel(q, 0, 1, 1, 61), ArgumentError);
    CHECK_THROWS_AS((void)channel_kernel(q, 0, 1, 1, -1), ArgumentError);
}

TEST_CASE("Parseval and positivity of the Gram structure") {
    const auto& q = fixtures::quartic();
    CHECK(parseval(q, 20) == doctest::Approx(21.0).epsilon(1e-6 / 21));
    CHECK(parseval(q, 0) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("no time periodicity for the quartic") {
    const auto& q = fixtures::quartic();
    CHECK(kernel_autocorrelation(q, 20, 0) == doctest::Approx(1.0));
    for (double t = 0.25; t <= 20; t += 0.25) CHECK(kernel_autocorrelation(q, 20, t) < 0.99);
    // equally spaced oscillator levels return after t = π/2
    const auto& osc = fixtures::oscillator();
    CHECK(kernel_autocorrelation(osc, 20, std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kernel export") {
    const auto& q = fixtures::quartic();
    const auto dir = fs::temp_directory_path() / "specprobe_kernel_test";
    fs::create_directories(dir);

    export_kernel_grid(q, {0.5}, {1.0}, {1.2}, 10, dir / "one.csv");
    const auto one = read_csv(dir / "one.csv");
    CHECK(one.rows.size() == 1);
    CHECK(one.header == std::vector<std::string>{"t", "r", "s", "reK", "imK", "weighted_reK", "weighted_imK"});

    const std::vector<double> t = {-1.0, 0.0, 0.7};
    const std::vector<double> rs = {0.5, 0.9, 1.4};
    export_kernel_grid(q, t, rs, rs, 20, dir / "grid.csv");
    const auto rows = read_kernel_csv(dir / "grid.csv");
    REQUIRE(rows.size() == 27);
    const auto grid = kernel_grid(q, t, rs, rs, 20);
    for (std::size_t it = 0; it < t.size(); ++it) {
        for (std::size_t ir = 0; ir < rs.size(); ++ir) {
            for (std::size_t is = 0; is < rs.size(); ++is) {
                const auto& row = rows[(it * 3 + ir) * 3 + is];
                CHECK(row.t == t[it]);
                CHECK(row.r == rs[ir]);
                CHECK(row.s == rs[is]);
                CHECK(row.re == grid.at(it, ir, is).real());
                CHECK(row.im == grid.at(it, ir, is).imag());
                const auto& mirror = rows[(it * 3 + is) * 3 + ir];
                CHECK(row.re == doctest::Approx(mirror.re).epsilon(1e-12));
            }
        }
    }
    CHECK_THROWS_AS(export_kernel_grid(q, t, rs, rs, 20, dir / "missing" / "x.csv"), IoError);
    CHECK_THROWS_AS((void)kernel_grid(q, {}, rs, rs, 20), ArgumentError);
    fs::remove_all(dir);
}

TEST_CASE("range helper") {
    const auto v = linspace_step(0, 1, 0.25);
    CHECK(v.size() == 5);
    CHECK(v.back() == 1.0);
    CHECK(linspace_step(0.5, 1.5, 0.1).size() == 11);
    CHECK_THROWS_AS((void)linspace_step(1, 0, 0.1), ArgumentError);
}

}
