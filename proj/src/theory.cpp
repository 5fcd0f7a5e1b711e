#include "drivewave/theory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "drivewave/wave.hpp"

namespace drivewave {

std::string_view to_string(AnalyticSign s) {
    switch (s) {
        case AnalyticSign::Negative: return "Negative";
        case AnalyticSign::Positive: return "Positive";
        case AnalyticSign::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string_view to_string(Clause c) {
    switch (c) {
        case Clause::C1a: return "1a";
        case Clause::C1b: return "1b";
        case Clause::C1c: return "1c";
        case Clause::C2a: return "2a";
        case Clause::C2b: return "2b";
        case Clause::None: return "none";
    }
    return "none";
}

AnalyticSign parse_analytic_sign(std::string_view text) {
    for (AnalyticSign s : {AnalyticSign::Negative, AnalyticSign::Positive, AnalyticSign::Unknown})
        if (text == to_string(s)) return s;
    throw std::invalid_argument("unknown analytic sign '" + std::string(text) + "'");
}

Clause parse_clause(std::string_view text) {
    for (Clause c : {Clause::C1a, Clause::C1b, Clause::C1c, Clause::C2a, Clause::C2b, Clause::None})
        if (text == to_string(c)) return c;
    throw std::invalid_argument("unknown clause '" + std::string(text) + "'");
}

namespace {

// a < b (or a <= b) with a margin: near-ties satisfy neither side
bool below(double a, double b) { return b - a >= kTieSlack; }
bool above(double a, double b) { return a - b >= kTieSlack; }

}  // namespace

bool theorem1_trivial(double s, double r) {
    if (!(s < 1.0) || !(r > 0.0)) return false;
    return above(s, 0.5) && below(r, (2.0 * s - 1.0) / (2.0 * (1.0 - s)));
}

AnalyticVerdict theorem2_sign(double s, double r) {
    AnalyticVerdict v;
    if (!(s > 0.0 && s < 1.0) || !(r > 0.0)) return v;
    const double theta = (2.0 * s - 1.0) / s;
    const double theta3 = theta * theta * theta;
    const double erad = s / (1.0 - s);

    if (below(s, 0.5)) {
        v.sign = AnalyticSign::Negative;
        v.clause = Clause::C1a;
        v.bounds.upper = -2.0 * std::sqrt(1.0 - 2.0 * s);
        return v;
    }
    const bool middle = above(s, 0.5) && below(s, 2.0 / 3.0);
    if (middle && above(r, erad) && below(r, 4.0)) {
        const double ratio = (1.0 - s) * theta3 / (2.0 - 3.0 * s + theta3);
        const double lower = erad / (1.0 - std::pow(ratio, 0.25));
        if (above(r, lower)) {
            v.sign = AnalyticSign::Negative;
            v.clause = Clause::C1b;
            return v;
        }
    }
    if (middle && above(r, 4.0) && above(r, erad)) {
        const double q = 1.0 - s / (r * (1.0 - s));
        const double q4 = q * q * q * q;
        if (above(q4 * (2.0 - 3.0 * s), (r + 1.0 - q4) * theta3)) {
            v.sign = AnalyticSign::Negative;
            v.clause = Clause::C1c;
            return v;
        }
    }
    if (above(s, 2.0 / 3.0) && below(r, 4.0)) {
        v.sign = AnalyticSign::Positive;
        v.clause = Clause::C2a;
        return v;
    }
    if (above(s, 2.0 / 3.0)) {
        const double num = s * s * s * (3.0 * s - 2.0);
        const double den = std::pow(2.0 * s - 1.0, 3) - num;
        if (den <= 0.0 || below(r, num / den)) {
            v.sign = AnalyticSign::Positive;
            v.clause = Clause::C2b;
            return v;
        }
    }
    return v;
}

AnalyticVerdict analytic_verdict(double s, double r) {
    AnalyticVerdict v = theorem2_sign(s, r);
    v.trivial_only = theorem1_trivial(s, r);
    if (v.trivial_only) v.bounds.lower = kpp_speed(r);
    return v;
}

AnalyticVerdict analytic_verdict(const ModelSpec& m) {
    const bool covered = (m.system == System::DensityDrive || m.system == System::FrequencyDrive) &&
                         m.selection == Selection::Survival &&
                         m.demography.variant == Demography::LogisticB_ConstD;
    if (!covered) return {};
    return analytic_verdict(m.s, m.demography.r);
}

double cubic_speed(double s) {
    if (!(s > 0.0)) throw std::domain_error("cubic_speed: s must be positive");
    return (2.0 - 3.0 * s) / std::sqrt(2.0 * s);
}

double kpp_speed(double r) { return 2.0 * std::sqrt(r); }

std::optional<double> spreading_upper_bound(double s, double r) {
    const double excess = r - 0.5 * (2.0 * s - 1.0) / (1.0 - s);
    if (!(excess > 0.0)) return std::nullopt;
    return 2.0 * std::sqrt(2.0 * (1.0 - s) * excess);
}

double scalar_reaction_integral(System tag, double s) {
    constexpr std::size_t nodes = 4001;
    std::vector<double> f(nodes);
    const double h = 1.0 / static_cast<double>(nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i) f[i] = scalar_reaction(tag, s, static_cast<double>(i) * h);
    return integrate_uniform(f, h);
}

double scalar_zero_level(System tag) {
    double lo = 0.5, hi = 0.95;
    double f_lo = scalar_reaction_integral(tag, lo);
    if (!(f_lo > 0.0) || !(scalar_reaction_integral(tag, hi) < 0.0))
        throw std::logic_error("scalar_zero_level: root not bracketed");
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = scalar_reaction_integral(tag, mid);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace drivewave
