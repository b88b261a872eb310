#include "specprobe/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "specprobe/errors.hpp"

namespace specprobe {

namespace {

/// exponent * (exponent - 1) * ... (order factors)
double falling_factorial(int exponent, int order) {
    double out = 1.0;
    for (int k = 0; k < order; ++k) out *= static_cast<double>(exponent - k);
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

PowerTerm parse_term(std::string_view text) {
    text = trim(text);
    const auto star = text.find('*');
    if (star == std::string_view::npos) {
        throw ArgumentError("model term '" + std::string(text) + "' is not of the form coeff*r^exp");
    }
    const auto coeff_text = trim(text.substr(0, star));
    auto rest = trim(text.substr(star + 1));
    if (rest.size() < 3 || rest[0] != 'r' || rest[1] != '^') {
        throw ArgumentError("model term '" + std::string(text) + "' is not of the form coeff*r^exp");
    }
    const auto exp_text = trim(rest.substr(2));

    // std::from_chars for double is unavailable in older libstdc++; strtod on a copy.
    const std::string coeff_str(coeff_text);
    char* end = nullptr;
    const double coeff = std::strtod(coeff_str.c_str(), &end);
    if (coeff_str.empty() || end != coeff_str.c_str() + coeff_str.size()) {
        throw ArgumentError("bad coefficient '" + coeff_str + "'");
    }
    int exponent = 0;
    const auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size()) {
        throw ArgumentError("bad exponent '" + std::string(exp_text) + "'");
    }
    return {coeff, exponent};
}

}  // namespace

PotentialModel::PotentialModel(std::vector<PowerTerm> terms, double threshold, bool allow_harmonic)
    : terms_(std::move(terms)), growth_index_(0), threshold_(threshold), harmonic_(false) {
    if (terms_.empty()) throw ArgumentError("potential needs at least one term");
    if (!(threshold_ > 0)) throw ArgumentError("threshold radius R must be positive");
    int min_exp = std::numeric_limits<int>::max();
    for (const auto& t : terms_) {
        if (!(t.coeff > 0) || !std::isfinite(t.coeff)) {
            throw ArgumentError("potential coefficients must be positive and finite");
        }
        if (t.exponent % 2 != 0 || t.exponent < 2) {
            throw ArgumentError("potential exponents must be even integers >= 4");
        }
        min_exp = std::min(min_exp, t.exponent);
    }
    if (min_exp == 2) {
        if (!allow_harmonic || terms_.size() != 1) {
            throw ArgumentError("c>1 violated: r^2 term only allowed as a single harmonic "
                                "calibration model (--allow-harmonic)");
        }
        harmonic_ = true;
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
    growth_index_ = 0.5 * min_exp;
}

PotentialModel PotentialModel::parse(std::string_view spec, bool allow_harmonic, double threshold) {
    std::vector<PowerTerm> terms;
    spec = trim(spec);
    if (spec.empty()) throw ArgumentError("empty model string");
    std::size_t start = 0;
    while (start <= spec.size()) {
        const auto plus = spec.find('+', start);
        const auto piece = spec.substr(start, plus == std::string_view::npos ? spec.npos : plus - start);
        terms.push_back(parse_term(piece));
        if (plus == std::string_view::npos) break;
        start = plus + 1;
    }
    return PotentialModel(std::move(terms), threshold, allow_harmonic);
}

double PotentialModel::derivative(double r, int order) const {
    if (!(r > 0)) throw DomainError("potential evaluated at r <= 0");
    if (order < 0 || order > 3) throw ArgumentError("derivative order must be in 0..3");
    double sum = 0.0;
    for (const auto& t : terms_) {
        if (order > t.exponent) continue;
        sum += t.coeff * falling_factorial(t.exponent, order) * std::pow(r, t.exponent - order);
    }
    return sum;
}

std::string PotentialModel::id() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) os << '+';
        os << terms_[i].coeff << "*r^" << terms_[i].exponent;
    }
    return os.str();
}

Channel::Channel(int d, int n) : d_(d), n_(n) {
    if (d < 3) throw ArgumentError("space dimension d must be >= 3");
    if (n < 0) throw ArgumentError("angular degree n must be >= 0");
    gamma_ = 0.25 * (d - 1) * (d - 3) + static_cast<double>(n) * (n + d - 2);
}

double eval_potential(const PotentialModel& model, double r, int order) {
    return model.derivative(r, order);
}

AssumptionReport validate_assumptions(const PotentialModel& model, double r_lo, double r_hi,
                                      int samples, double ratio_bound) {
    if (!(r_lo > 0) || !(r_hi > r_lo)) throw ArgumentError("need 0 < r_lo < r_hi");
    if (r_lo < model.threshold()) throw ArgumentError("r_lo must not lie below the threshold R");
    if (samples < 2) throw ArgumentError("need at least two samples");

    AssumptionReport rep;
    rep.convex = true;
    rep.growth = true;
    rep.bounded_ratios = true;
    rep.max_admissible_c = std::numeric_limits<double>::infinity();
    rep.min_convexity = std::numeric_limits<double>::infinity();
    rep.worst_growth_margin = std::numeric_limits<double>::infinity();
    const double c = model.growth_index();
    const double log_lo = std::log(r_lo);
    const double log_step = (std::log(r_hi) - log_lo) / (samples - 1);

    for (int i = 0; i < samples; ++i) {
        const double r = i + 1 == samples ? r_hi : std::exp(log_lo + i * log_step);
        double v[4];
        for (int j = 0; j < 4; ++j) v[j] = model.derivative(r, j);

        rep.min_convexity = std::min(rep.min_convexity, v[2]);
        if (!(v[2] > 0)) rep.convex = false;

        const double margin = r * v[1] - 2 * c * v[0];
        // relative slack: pure powers satisfy the identity exactly, sums only up to rounding
        const double slack = 64 * std::numeric_limits<double>::epsilon() * r * std::abs(v[1]);
        rep.worst_growth_margin = std::min(rep.worst_growth_margin, margin);
        if (margin < -slack || !(v[0] > 0)) rep.growth = false;

        rep.max_admissible_c = std::min(rep.max_admissible_c, r * v[1] / (2 * v[0]));

        for (int j = 1; j <= 3; ++j) {
            const double ratio = v[j - 1] != 0 ? r * std::abs(v[j]) / std::abs(v[j - 1])
                                               : std::numeric_limits<double>::infinity();
            rep.worst_ratio[j - 1] = std::max(rep.worst_ratio[j - 1], ratio);
            if (!std::isfinite(ratio) || ratio > ratio_bound) rep.bounded_ratios = false;
        }
    }
    rep.superquadratic = rep.max_admissible_c > 1.0 + 1e-12;
    return rep;
}

double effective_potential(const Channel& channel, const PotentialModel& model, double r, int order) {
    if (!(r > 0)) throw DomainError("effective potential evaluated at r <= 0");
    if (order < 0 || order > 3) throw ArgumentError("derivative order must be in 0..3");
    static constexpr double centrifugal_factor[4] = {1.0, -2.0, 6.0, -24.0};
    const double centrifugal = channel.gamma() * centrifugal_factor[order] * std::pow(r, -2 - order);
    return centrifugal + model.derivative(r, order);
}

}  // namespace specprobe
