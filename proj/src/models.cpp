#include "drivewave/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace drivewave {

double birth_rate(const DemographySpec& demo, double n) {
    switch (demo.variant) {
        case Demography::LogisticB_ConstD:
            return demo.r * (1.0 - n) + 1.0;
        case Demography::AlleeB_ConstD:
            // clamp applies to B only, never to B - D
            return std::max(demo.r * (1.0 - n) * (n - demo.a) + 1.0, 0.0);
        case Demography::ConstB_LogisticD:
        case Demography::ConstB_AlleeD:
            return demo.r + 1.0;
    }
    return 0.0;
}

double death_rate(const DemographySpec& demo, double n) {
    switch (demo.variant) {
        case Demography::LogisticB_ConstD:
        case Demography::AlleeB_ConstD:
            return 1.0;
        case Demography::ConstB_LogisticD:
            return 1.0 + demo.r * n;
        case Demography::ConstB_AlleeD:
            return 1.0 + demo.r + demo.r * (n - 1.0) * (n - demo.a);
    }
    return 1.0;
}

DriveRates drive_reaction(const ModelSpec& model, double nD, double nO) {
    const GenotypeParams g = model.genotype();
    const double n = nD + nO;
    const double inv = 1.0 / std::max(n, kDensityFloor);
    const double B = birth_rate(model.demography, n);
    const double D = death_rate(model.demography, n);
    const double rate_D = nD * (g.omega_D * g.beta_D * B * (2.0 * nO + g.beta_D * nD) * inv - g.d_D * D);
    const double rate_O = nO * (B * nO * inv - D);
    return {rate_D, rate_O};
}

namespace {

// s p (1-p) (p - (2s-1)/s) written without the division by s
double cubic_term(double s, double p) { return p * (1.0 - p) * (s * p - 2.0 * s + 1.0); }

double tsn_denominator(double s, double p) { return 1.0 - s + s * (1.0 - p) * (1.0 - p); }

}  // namespace

FrequencyRates frequency_reaction(const ModelSpec& model, double p, double n) {
    if (!(n > 0.0)) throw std::domain_error("frequency_reaction: total density must be positive");
    const double s = model.s;
    const double B = birth_rate(model.demography, n);
    const double D = death_rate(model.demography, n);
    double rate_p = 0.0;
    if (model.system == System::FrequencyDriveGCD) {
        rate_p = scalar_reaction(System::ScalarTSN, s, p);
    } else {
        rate_p = B * cubic_term(s, p);
    }
    const double rate_n = n * (tsn_denominator(s, p) * B - D);
    return {rate_p, rate_n, 2.0 / n};
}

double scalar_reaction(System tag, double s, double p) {
    switch (tag) {
        case System::ScalarCubic:
            return cubic_term(s, p);
        case System::ScalarTSN: {
            const double den = tsn_denominator(s, p);
            if (den <= 0.0) throw std::domain_error("scalar_reaction: TSN denominator vanishes (s = 1, p = 1)");
            return cubic_term(s, p) / den;
        }
        default:
            throw std::domain_error("scalar_reaction: not a scalar system");
    }
}

WolbachiaRates wolbachia_reaction(const WolbachiaParams& params, const DemographySpec& demo, double nw,
                                  double ns) {
    const double n = nw + ns;
    const double inv = 1.0 / std::max(n, kDensityFloor);
    const double qw = nw * inv;
    const double qs = ns * inv;
    const double B = birth_rate(demo, n);
    const double D = death_rate(demo, n);
    const double rate_w = (qw * qw * params.f_w + qw * qs * params.f_w) * B * n - D * nw;
    const double rate_s = (qs * qs + qw * qs * params.omega_H) * B * n - D * ns;
    return {rate_w, rate_s};
}

namespace {

double growth(const DemographySpec& demo, double factor, double n) {
    return factor * birth_rate(demo, n) - death_rate(demo, n);
}

// Rightmost sign change of the growth on a uniform pre-scan, refined by bisection.
double capacity_by_bisection(const DemographySpec& demo, double factor) {
    constexpr int kScan = 10000;
    if (growth(demo, factor, 1.0) >= 0.0) return 1.0;
    int last = -1;
    for (int i = kScan; i >= 0; --i) {
        if (growth(demo, factor, static_cast<double>(i) / kScan) >= 0.0) {
            last = i;
            break;
        }
    }
    if (last < 0) return 0.0;
    double lo = static_cast<double>(last) / kScan;
    double hi = static_cast<double>(last + 1) / kScan;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (growth(demo, factor, mid) >= 0.0 ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

double carrying_capacity(const DemographySpec& demo, double relative_growth) {
    const double f = relative_growth;
    const double r = demo.r;
    switch (demo.variant) {
        case Demography::LogisticB_ConstD: {
            // f (r(1-n)+1) >= 1  <=>  n <= 1 - (1-f)/(f r)
            if (f <= 0.0) return 0.0;
            const double root = 1.0 - (1.0 - f) / (f * r);
            return std::clamp(root, 0.0, 1.0);
        }
        case Demography::ConstB_LogisticD: {
            // f (r+1) >= 1 + r n  <=>  n <= (f (r+1) - 1)/r
            const double root = (f * (r + 1.0) - 1.0) / r;
            if (root < 0.0) return 0.0;
            return std::min(root, 1.0);
        }
        case Demography::AlleeB_ConstD:
        case Demography::ConstB_AlleeD:
            return capacity_by_bisection(demo, f);
    }
    return 0.0;
}

bool is_eradication_drive(const DemographySpec& demo, double s) {
    if (s <= 0.0) return false;
    if (s >= 1.0) return true;
    const double r = demo.r;
    const double gap = (1.0 - demo.a) * (1.0 - demo.a);
    switch (demo.variant) {
        case Demography::LogisticB_ConstD:
        case Demography::ConstB_LogisticD:
            return r < s / (1.0 - s);
        case Demography::AlleeB_ConstD:
            return r < 4.0 * s / ((1.0 - s) * gap);
        case Demography::ConstB_AlleeD:
            return gap <= 4.0 * s || r < 4.0 * s / (gap - 4.0 * s);
    }
    return false;
}

std::optional<double> bistability_threshold(double s) {
    if (s <= 0.5) return std::nullopt;
    return (2.0 * s - 1.0) / s;
}

std::optional<double> wolbachia_equilibrium(const WolbachiaParams& params) {
    if (params.omega_H >= 1.0) throw std::domain_error("wolbachia_equilibrium: omega_H = 1 is degenerate");
    if (params.omega_H > params.f_w) return std::nullopt;
    return (1.0 - params.f_w) / (1.0 - params.omega_H);
}

std::string_view to_string(Demography d) {
    switch (d) {
        case Demography::LogisticB_ConstD: return "logistic-b";
        case Demography::AlleeB_ConstD: return "allee-b";
        case Demography::ConstB_LogisticD: return "logistic-d";
        case Demography::ConstB_AlleeD: return "allee-d";
    }
    return "?";
}

std::string_view to_string(System s) {
    switch (s) {
        case System::DensityDrive: return "density";
        case System::FrequencyDrive: return "frequency";
        case System::FrequencyDriveGCD: return "frequency-gcd";
        case System::ScalarCubic: return "cubic";
        case System::ScalarTSN: return "tsn";
        case System::WolbachiaDensity: return "wolbachia";
    }
    return "?";
}

std::string_view to_string(Selection s) { return s == Selection::Survival ? "survival" : "fecundity"; }

Demography parse_demography(std::string_view text) {
    for (auto d : {Demography::LogisticB_ConstD, Demography::AlleeB_ConstD, Demography::ConstB_LogisticD,
                   Demography::ConstB_AlleeD})
        if (to_string(d) == text) return d;
    throw std::invalid_argument("unknown demography '" + std::string(text) +
                                "' (expected logistic-b, allee-b, logistic-d or allee-d)");
}

System parse_system(std::string_view text) {
    for (auto s : {System::DensityDrive, System::FrequencyDrive, System::FrequencyDriveGCD, System::ScalarCubic,
                   System::ScalarTSN, System::WolbachiaDensity})
        if (to_string(s) == text) return s;
    throw std::invalid_argument("unknown model '" + std::string(text) +
                                "' (expected density, frequency, frequency-gcd, cubic, tsn or wolbachia)");
}

Selection parse_selection(std::string_view text) {
    if (text == "survival") return Selection::Survival;
    if (text == "fecundity") return Selection::Fecundity;
    throw std::invalid_argument("unknown selection '" + std::string(text) + "' (expected survival or fecundity)");
}

}  // namespace drivewave
