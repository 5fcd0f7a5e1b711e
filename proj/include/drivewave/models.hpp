#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace drivewave {

/// Denominator floor for every frequency ratio (nD/n, nO/n, nw/n).
inline constexpr double kDensityFloor = 1e-12;

enum class Demography {
    LogisticB_ConstD,  ///< B = r(1-n)+1, D = 1
    AlleeB_ConstD,     ///< B = max(r(1-n)(n-a)+1, 0), D = 1
    ConstB_LogisticD,  ///< B = r+1, D = 1+rn
    ConstB_AlleeD,     ///< B = r+1, D = 1+r+r(n-1)(n-a)
};

/// Per-capita birth and death rates of the wild type, normalized so that
/// the wild-type carrying capacity is 1 and min D = 1.
struct DemographySpec {
    Demography variant = Demography::LogisticB_ConstD;
    double r = 1.0;
    double a = 0.0;  // Allee threshold, ignored by the logistic variants

    bool operator==(const DemographySpec&) const = default;
};

/// Genotype parameters of DD relative to OO (multiplicative).
struct GenotypeParams {
    double omega_D = 1.0;  // juvenile survival
    double beta_D = 1.0;   // gamete fecundity
    double d_D = 1.0;      // death rate

    static GenotypeParams survival_selection(double s) { return {1.0 - s, 1.0, 1.0}; }
    static GenotypeParams fecundity_selection(double s) { return {1.0, 1.0 - s, 1.0}; }

    bool operator==(const GenotypeParams&) const = default;
};

struct WolbachiaParams {
    double f_w = 1.0;      // fertility factor of infected mothers
    double omega_H = 0.0;  // hatching factor of incompatible crosses

    bool operator==(const WolbachiaParams&) const = default;
};

enum class System {
    DensityDrive,       ///< (nD, nO)
    FrequencyDrive,     ///< (p, n) with demographic advection
    FrequencyDriveGCD,  ///< (p, n), p-equation replaced by the TSN reaction
    ScalarCubic,        ///< p only, density independent
    ScalarTSN,          ///< p only, density independent
    WolbachiaDensity,   ///< (nw, ns)
};

enum class Selection { Survival, Fecundity };

/// Which system to integrate and its parameters. The fitness cost s is
/// kept alongside the selection mode; genotype() derives (omega_D, beta_D,
/// d_D) from them.
struct ModelSpec {
    System system = System::DensityDrive;
    DemographySpec demography{};
    Selection selection = Selection::Survival;
    double s = 0.0;
    WolbachiaParams wolbachia{};

    GenotypeParams genotype() const {
        return selection == Selection::Survival ? GenotypeParams::survival_selection(s)
                                                : GenotypeParams::fecundity_selection(s);
    }

    bool is_scalar() const { return system == System::ScalarCubic || system == System::ScalarTSN; }
    bool is_frequency() const {
        return system == System::FrequencyDrive || system == System::FrequencyDriveGCD;
    }
    bool operator==(const ModelSpec&) const = default;
};

struct DriveRates {
    double rate_D;
    double rate_O;
};

struct FrequencyRates {
    double rate_p;
    double rate_n;
    double advection;  // coefficient of d/dx(log n) * dp/dx is 2; this is 2/n
};

struct WolbachiaRates {
    double rate_w;
    double rate_s;
};

double birth_rate(const DemographySpec& demo, double n);
double death_rate(const DemographySpec& demo, double n);

DriveRates drive_reaction(const ModelSpec& model, double nD, double nO);

/// Throws std::domain_error for n <= 0: the caller must regularize first.
FrequencyRates frequency_reaction(const ModelSpec& model, double p, double n);

/// Throws std::domain_error for the TSN singularity s = 1, p = 1, and for
/// a non-scalar system tag.
double scalar_reaction(System tag, double s, double p);

WolbachiaRates wolbachia_reaction(const WolbachiaParams& params, const DemographySpec& demo,
                                  double nw, double ns);

/// Largest n in [0,1] with factor*B(n) - D(n) >= 0, or 0 when there is none.
double carrying_capacity(const DemographySpec& demo, double relative_growth);

/// max over [0,1] of (1-s)B - D is negative (closed form per variant).
bool is_eradication_drive(const DemographySpec& demo, double s);

/// (2s-1)/s for s > 1/2, none otherwise.
std::optional<double> bistability_threshold(double s);

/// (1-f_w)/(1-omega_H) when omega_H <= f_w; throws for omega_H == 1.
std::optional<double> wolbachia_equilibrium(const WolbachiaParams& params);

std::string_view to_string(Demography d);
std::string_view to_string(System s);
std::string_view to_string(Selection s);
Demography parse_demography(std::string_view text);
System parse_system(std::string_view text);
Selection parse_selection(std::string_view text);

}  // namespace drivewave
