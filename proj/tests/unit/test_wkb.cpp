#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "specprobe/errors.hpp"
#include "specprobe/wkb.hpp"

using namespace specprobe;
using std::numbers::pi;

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST_SUITE("wkb") {

TEST_CASE("turning points") {
    const auto q = PotentialModel::quartic();
    const auto a = turning_points(Channel(3, 0), q, 16);
    CHECK(a.T == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(a.X == doctest::Approx(2.0).epsilon(1e-12));
    const auto b = turning_points(Channel(5, 0), q, 16);
    const double T_ref = oracle::bisect([](double T) { return 2 / (T * T) + std::pow(T, 4) - 16; }, 1.0, 3.0);
    CHECK(b.T == doctest::Approx(T_ref).epsilon(1e-12));
    CHECK(b.T == doctest::Approx(1.98392812404157).epsilon(1e-12));
    CHECK(b.X == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(turning_points(Channel(3, 0), PotentialModel::harmonic(), 4).T == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)turning_points(Channel(5, 0), q, 1.0), ArgumentError);
}

TEST_CASE("action integral") {
    CHECK(action_integral(PotentialModel::harmonic(), 12) == doctest::Approx(3.0).epsilon(1e-13));
    const double ref = std::pow(16.0, 0.75) * oracle::unit_root_area(4) / pi;
    CHECK(action_integral(PotentialModel::quartic(), 16) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(action_integral(PotentialModel::quartic(), 16) == doctest::Approx(2.22567157779753).epsilon(1e-12));
    for (double lambda : {0.7, 5.0, 333.0}) {
        CHECK(action_integral(PotentialModel::quartic(), 2 * lambda) / action_integral(PotentialModel::quartic(), lambda) ==
              doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-10));
        for (int two_c : {4, 6, 8}) {
            const PotentialModel m({{1.0, two_c}});
            const double c = two_c / 2.0;
            CHECK(action_integral(m, lambda) ==
                  doctest::Approx(std::pow(lambda, (c + 1) / (2 * c)) * action_integral(m, 1.0)).epsilon(1e-9));
        }
    }
}

TEST_CASE("quantization residuals") {
    const auto& osc = fixtures::oscillator();
    for (const auto& p : osc.pairs) CHECK(std::abs(bs_residual(p, osc.channel, osc.model)) <= 1e-6);
    const auto& q = fixtures::quartic();
    CHECK(action_integral(q.model, q.pairs[0].lambda) == doctest::Approx(0.7571).epsilon(2e-4));
    const double r0 = bs_residual(q.pairs[0], q.channel, q.model);
    const double r1 = bs_residual(q.pairs[1], q.channel, q.model);
    CHECK(r0 == doctest::Approx(0.007).epsilon(0.1));
    CHECK(r1 > 0);
    CHECK(r1 < r0);
    std::vector<double> early, late;
    for (int l = 5; l <= 15; ++l) early.push_back(std::abs(bs_residual(q.pairs[l], q.channel, q.model)));
    for (int l = 20; l <= 40; ++l) late.push_back(std::abs(bs_residual(q.pairs[l], q.channel, q.model)));
    CHECK(median(late) < median(early));
}

TEST_CASE("phase and zeta") {
    const Channel ch(3, 0);
    const auto h = PotentialModel::harmonic();
    const double S2 = 2 * pi / 3 - std::sqrt(3.0) / 2;
    const auto at2 = phase_and_zeta(ch, h, 4, 2.0);
    REQUIRE(at2.S.has_value());
    CHECK(*at2.S == doctest::Approx(S2).epsilon(1e-10));
    CHECK(at2.zeta == 0);
    CHECK(phase_and_zeta(ch, h, 4, 1.0).zeta == doctest::Approx(-S2).epsilon(1e-10));
    CHECK(phase_and_zeta(ch, h, 4, 3.0).zeta > 0);
    CHECK_FALSE(phase_and_zeta(ch, h, 4, 3.0).S.has_value());
    CHECK_THROWS_AS((void)phase_and_zeta(ch, h, 4, 0.0), DomainError);

    const auto& q = fixtures::quartic(1);
    for (int l : {5, 25}) {
        const auto s = summarize(q.pairs[l], q.channel, q.model);
        CHECK(*phase_and_zeta(q.channel, q.model, s.lambda, s.T).S == doctest::Approx(s.Z).epsilon(1e-9));
        CHECK(phase_and_zeta(q.channel, q.model, s.lambda, 1.0).zeta == doctest::Approx(-s.Z).epsilon(1e-9));
    }
}

TEST_CASE("allowed interval") {
    const auto osc = allowed_interval(Channel(3, 0), PotentialModel::harmonic(), 16);
    CHECK(osc.a == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(osc.b == doctest::Approx(std::sqrt(8.0)).epsilon(1e-10));
    const auto q = allowed_interval(Channel(3, 0), PotentialModel::quartic(), 16);
    CHECK(q.b == doctest::Approx(std::pow(8.0, 0.25)).epsilon(1e-10));
    const auto q5 = allowed_interval(Channel(5, 0), PotentialModel::quartic(), 16);
    const double a_ref = oracle::bisect([](double a) { return 8 - 2 / (a * a) - std::pow(a, 4); }, 0.3, 1.0);
    CHECK(q5.a == doctest::Approx(a_ref).epsilon(1e-10));
    CHECK(q5.a == doctest::Approx(0.501996399561304).epsilon(1e-10));

    try {
        (void)allowed_interval(Channel(5, 2), PotentialModel::quartic(), 5.0);
        FAIL("expected threshold error");
    } catch (const ThresholdError& e) {
        CHECK(e.lambda_zero() > 5.0);
        CHECK_NOTHROW((void)allowed_interval(Channel(5, 2), PotentialModel::quartic(), e.lambda_zero() * 1.01));
    }
    const auto& table = fixtures::quartic();
    const double l0 = lambda_zero(table);
    CHECK(l0 >= connectivity_threshold(table.channel, table.model));
}

TEST_CASE("amplitude from boundary data") {
    for (double lambda : {9.0, 400.0}) {
        const double k = std::sqrt(lambda);
        const double s = std::pow(lambda, -0.25);
        const auto c = amplitude_from_boundary(lambda, 0, 0, s, 0);
        CHECK(c.real() == doctest::Approx(1.0));
        CHECK(std::abs(c.imag()) < 1e-15);
        const auto sn = amplitude_from_boundary(lambda, 0, 0, 0, s * k);
        CHECK(std::abs(sn.real()) < 1e-15);
        CHECK(sn.imag() == doctest::Approx(-1.0));
        const auto rot = rephase_amplitude(c, lambda);
        CHECK(std::arg(rot) == doctest::Approx(std::remainder(-k, 2 * pi)).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)amplitude_from_boundary(2.0, 3.0, 1.0, 1.0, 1.0), DomainError);
    EigenPair below;  // U(1) = 1 for the quartic s-wave
    below.lambda = 0.5;
    below.f_at_1 = 1;
    CHECK_THROWS_AS((void)extract_C_lambda(below, Channel(3, 0), PotentialModel::quartic()), DomainError);
}

TEST_CASE("amplitudes do not collapse") {
    const auto& q = fixtures::quartic();
    const auto s = summarize(q);
    std::vector<double> mags;
    for (int l = 30; l <= 50; ++l) mags.push_back(std::abs(s[l].C_lambda));
    CHECK(std::abs(std::abs(s[40].C_lambda) / median(mags) - 1) < 0.2);
    for (const auto& row : s) CHECK(std::abs(row.C_lambda) > 0);
    const auto fit = amplitude_scaling(s);
    CHECK(fit.exponent >= 0.125 - 0.03);
    const auto sextic = amplitude_scaling(summarize(fixtures::sextic()));
    CHECK(sextic.exponent >= 1.0 / 6 - 0.03);
    CHECK_THROWS_AS((void)amplitude_scaling(std::vector<WkbSummary>(s.begin(), s.begin() + 10)), ArgumentError);
}

TEST_CASE("allowed-region residual") {
    const auto& q = fixtures::quartic();
    std::vector<double> normalized;
    for (int l = 20; l <= 50; l += 10) {
        const auto& p = q.pairs[l];
        const auto c = extract_C_lambda(p, q.channel, q.model);
        const double res = allowed_region_residual(p, c, q, {0.8, 1.2});
        normalized.push_back(res / (std::abs(c) / std::sqrt(p.lambda)));
        const double lin = allowed_region_residual(p, c, q, {0.8, 1.2}, PhaseConvention::linear);
        CHECK(lin >= res);
    }
    CHECK(*std::max_element(normalized.begin(), normalized.end()) < 1.0);
    CHECK(normalized.back() <= normalized.front());

    // synthetic data built from the asymptotic form
    EigenPair synth = q.pairs[30];
    const std::complex<double> c(0.7, -1.9);
    const double scale = std::pow(synth.lambda, -0.25);
    for (std::size_t i = 0; i < synth.samples.size(); ++i) {
        const double r = q.grid.r(i);
        if (r < 0.79 || r > 1.21) continue;
        const double S = *phase_and_zeta(q.channel, q.model, synth.lambda, r).S;
        synth.samples[i] = scale * std::real(c * std::polar(1.0, S));
    }
    CHECK(allowed_region_residual(synth, c, q, {0.8, 1.2}) < 1e-9);

    CHECK_THROWS_AS((void)allowed_region_residual(q.pairs[30], c, q, {0.01, 1.2}), ArgumentError);
    CHECK_THROWS_AS((void)allowed_region_residual(q.pairs[30], c, q, {1.1, 1.3}), ArgumentError);
}

TEST_CASE("Langer comparison") {
    const auto& q = fixtures::quartic();
    double prev = 1e300;
    for (int l : {5, 10, 20, 40}) {
        const double r = langer_residual(q.pairs[l], q).residual;
        CHECK(r < prev);
        prev = r;
    }
    const auto& osc = fixtures::oscillator();
    CHECK(langer_residual(osc.pairs[20], osc).residual < langer_residual(osc.pairs[10], osc).residual);

    // f = a(r) P(-zeta(r)) exactly, on a coarse grid of its own
    SpectrumTable coarse = q;
    coarse.grid = RadialGrid{0.01, 8.01, 0.01, 800};
    EigenPair synth = q.pairs[30];
    synth.samples.assign(coarse.grid.size(), 0.0);
    const double T = turning_points(q.channel, q.model, synth.lambda).T;
    for (std::size_t i = 0; i < synth.samples.size(); ++i) {
        const double r = coarse.grid.r(i);
        if (r < 0.49 * T || r >= T) continue;
        const double zeta = phase_and_zeta(q.channel, q.model, synth.lambda, r).zeta;
        synth.samples[i] = 2.5 * std::pow(synth.lambda - effective_potential(q.channel, q.model, r), -0.25) *
                           langer_profile(-zeta);
    }
    const auto cmp = langer_residual(synth, coarse);
    CHECK(cmp.residual < 1e-8);
    CHECK(cmp.alpha == doctest::Approx(2.5).epsilon(1e-8));
    // window [1, 0.98 T] at the ground state holds only 4 nodes of a 0.1 grid
    SpectrumTable sparse = q;
    sparse.grid = RadialGrid{0.1, 8.1, 0.1, 80};
    EigenPair ground = q.pairs[0];
    ground.samples.assign(sparse.grid.size(), 1.0);
    CHECK_THROWS_AS((void)langer_residual(ground, sparse), ArgumentError);
    CHECK_THROWS_AS((void)langer_residual(ground, q), ArgumentError);
}

TEST_CASE("turning-point error integral") {
    const Channel ch(3, 0);
    const auto q = PotentialModel::quartic();
    std::vector<std::pair<double, double>> pts;
    for (double lambda : {100.0, 200.0, 400.0, 800.0, 1600.0}) {
        const auto a = appendix_error_integral(ch, q, lambda, 0.1);
        CHECK(a.total == doctest::Approx(a.I1 + a.I2 + a.I3));
        CHECK(a.band_halfwidth > 0);
        pts.emplace_back(lambda, a.total);
        const auto b = appendix_error_integral(ch, q, lambda, 0.2);
        CHECK(std::abs(b.total - a.total) <= 0.2 * a.total);
    }
    CHECK(fit_power_law(pts).exponent == doctest::Approx(-0.75).epsilon(0.1 / 0.75));
    const auto h = appendix_error_integral(ch, PotentialModel::harmonic(), 200, 0.1);
    CHECK(std::isfinite(h.total));
    CHECK_THROWS_AS((void)appendix_error_integral(ch, q, 200, 0.3), ArgumentError);
    CHECK_THROWS_AS((void)appendix_error_integral(ch, q, 0.01, 0.1), ArgumentError);
}

TEST_CASE("gap exponents") {
    CHECK(gap_scaling(fixtures::quartic()).exponent == doctest::Approx(0.25).epsilon(0.03 / 0.25));
    CHECK(gap_scaling(fixtures::sextic()).exponent == doctest::Approx(1.0 / 3).epsilon(0.03 * 3));
    CHECK(std::abs(gap_scaling(fixtures::oscillator()).exponent) < 1e-6);
    SpectrumTable small = fixtures::quartic();
    small.pairs.resize(10);
    CHECK_THROWS_AS((void)gap_scaling(small), ArgumentError);
    const auto& q = fixtures::quartic();
    for (int l = 3; l + 1 < static_cast<int>(q.pairs.size()); ++l) {
        CHECK(q.pairs[l + 1].lambda - q.pairs[l].lambda >= q.pairs[l].lambda - q.pairs[l - 1].lambda);
    }
}

}
