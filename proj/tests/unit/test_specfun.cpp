#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "specprobe/errors.hpp"
#include "specprobe/specfun.hpp"

using namespace specprobe;
using std::numbers::pi;

TEST_SUITE("specfun") {

TEST_CASE("Bessel J against the standard library") {
    for (double nu : {0.0, 0.5, 1.0, 1.5, 2.5, 3.5, 5.0, 10.5, 20.0, 40.5}) {
        for (double x : {1e-4, 0.3, 1.0, 4.0, 9.9, 16.5, 17.5, 25.0, 60.0, 150.0, 400.0}) {
            const double ref = std::cyl_bessel_j(nu, x);
            const double got = bessel_j(nu, x);
            CAPTURE(nu);
            CAPTURE(x);
            CHECK(std::abs(got - ref) <= 1e-12 * std::max(1.0, std::abs(ref)) + 1e-300);
        }
    }
}

TEST_CASE("half-integer order closed form") {
    for (double x : {0.1, 1.0, 7.0, 30.0, 200.0}) {
        CHECK(bessel_j(0.5, x) == doctest::Approx(std::sqrt(2 / (pi * x)) * std::sin(x)).epsilon(1e-12));
    }
}

TEST_CASE("orders in (-1, 0) and the Langer profile") {
    CHECK(bessel_j_real_order(1.0 / 3, 5.0) == doctest::Approx(-0.306420463800264).epsilon(1e-12));
    for (double x : {0.2, 1.0, 3.0, 12.0, 18.0, 40.0}) {
        CHECK(bessel_j_real_order(-1.0 / 3, x) ==
              doctest::Approx(oracle::bessel_j_negative(1.0 / 3, x)).epsilon(1e-11));
    }
    CHECK(langer_profile(pi / 4 + 2 * pi) == doctest::Approx(0.999277936494817).epsilon(1e-11));
    CHECK(langer_profile(50.0) - std::cos(50.0 - pi / 4) == doctest::Approx(-0.00121247).epsilon(1e-4));
    CHECK_THROWS_AS((void)langer_profile(0.0), DomainError);
    CHECK_THROWS_AS((void)bessel_j(-0.5, 1.0), ArgumentError);
    CHECK_THROWS_AS((void)bessel_j(1.0, -1.0), DomainError);
}

TEST_CASE("three-term recurrence and large-argument phase") {
    for (double nu : {1.0 / 3, 0.5, 2.5}) {
        for (double x = 0.1; x <= 100; x *= 1.13) {
            const double res = bessel_j_real_order(nu - 1, x) + bessel_j_real_order(nu + 1, x) -
                               (2 * nu / x) * bessel_j_real_order(nu, x);
            CHECK(std::abs(res) <= 1e-8);
        }
    }
    // standard phase z - νπ/2 - π/4
    for (double nu : {0.0, 1.5, 3.0}) {
        const double z = 4000.0;
        const double lead = std::sqrt(2 / (pi * z)) * std::cos(z - nu * pi / 2 - pi / 4);
        CHECK(std::abs(bessel_j(nu, z) - lead) <= 2 * (4 * nu * nu + 1) / (8 * z) * std::sqrt(2 / (pi * z)));
    }
}

TEST_CASE("square-root endpoint quadrature") {
    auto quarter = [](double x) { return std::sqrt(std::max(0.0, 1 - x * x)); };
    CHECK(integrate_sqrt_singular(quarter, 0, 1, SingularEnd::right) == doctest::Approx(pi / 4).epsilon(1e-13));
    for (double p : {4.0, 6.0, 8.0}) {
        auto f = [p](double x) { return std::sqrt(std::max(0.0, 1 - std::pow(x, p))); };
        CHECK(integrate_sqrt_singular(f, 0, 1, SingularEnd::right) ==
              doctest::Approx(oracle::unit_root_area(p)).epsilon(1e-12));
    }
    CHECK(oracle::unit_root_area(4) == doctest::Approx(0.874019184764040).epsilon(1e-13));
    CHECK(oracle::unit_root_area(6) == doctest::Approx(0.910743992957843).epsilon(1e-13));

    auto left = [](double x) { return std::sqrt(std::max(0.0, x - 2)) * std::exp(-x); };
    const double ref = oracle::simpson([](double t) { return 2 * t * t * std::exp(-2 - t * t); }, 0, 2, 20000);
    CHECK(integrate_sqrt_singular(left, 2, 6, SingularEnd::left) == doctest::Approx(ref).epsilon(1e-10));
    CHECK_THROWS_AS((void)integrate_sqrt_singular(quarter, 1, 1, SingularEnd::none), ArgumentError);

    auto smooth = [](double x) { return std::cos(3 * x) + x * x; };
    const double whole = integrate_sqrt_singular(smooth, 0, 2, SingularEnd::left);
    const double split = integrate_sqrt_singular(smooth, 0, 0.7, SingularEnd::left) +
                         integrate_sqrt_singular(smooth, 0.7, 2, SingularEnd::left);
    CHECK(std::abs(whole - split) <= 1e-12 * std::abs(whole));
}

TEST_CASE("smooth quadrature and Simpson") {
    CHECK(integrate_smooth([](double x) { return std::exp(x); }, 0, 3) == doctest::Approx(std::exp(3.0) - 1).epsilon(1e-14));
    std::vector<double> cubic;
    for (int i = 0; i <= 10; ++i) cubic.push_back(std::pow(0.1 * i, 3));
    CHECK(simpson(cubic, 0.1) == doctest::Approx(0.25).epsilon(1e-14));
    cubic.pop_back();
    CHECK_THROWS_AS((void)simpson(cubic, 0.1), ArgumentError);
}

TEST_CASE("power-law fits") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 1; i <= 40; ++i) pts.emplace_back(i * 3.0, 2.5 * std::pow(i * 3.0, -0.75));
    const auto fit = fit_power_law(pts);
    CHECK(fit.exponent == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(std::exp(fit.log_intercept) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.predict(10.0) == doctest::Approx(2.5 * std::pow(10.0, -0.75)));

    auto scaled = pts;
    for (auto& q : scaled) q.second *= 17.0;
    CHECK(fit_power_law(scaled).exponent == doctest::Approx(fit.exponent).epsilon(1e-14));

    std::vector<std::pair<double, double>> square, wiggle, flat;
    for (int i = 1; i <= 10; ++i) {
        square.emplace_back(i, static_cast<double>(i * i));
        flat.emplace_back(i, 4.0);
    }
    for (int i = 1; i <= 200; ++i) wiggle.emplace_back(i, 3 * std::pow(i, 0.25) * (1 + 0.01 * std::sin(i)));
    CHECK(fit_power_law(square).exponent == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fit_power_law(square).r_squared == doctest::Approx(1.0));
    CHECK(std::abs(fit_power_law(wiggle).exponent - 0.25) <= 0.01);
    CHECK(std::abs(fit_power_law(flat).exponent) <= 1e-14);

    const auto top = fit_power_law(pts, top_half(pts.size()));
    CHECK(top.count == 20);
    CHECK(top.x_min == 63.0);

    std::vector<std::pair<double, double>> few(pts.begin(), pts.begin() + 4);
    CHECK_THROWS_AS((void)fit_power_law(few), ArgumentError);
    pts[3].second = -1;
    CHECK_THROWS_AS((void)fit_power_law(pts), DomainError);
}

TEST_CASE("bracketed root finding") {
    CHECK(find_root([](double x) { return std::cos(x); }, 1, 2) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK_THROWS_AS((void)find_root([](double x) { return x * x + 1; }, -1, 1), NumericalError);
}

}
