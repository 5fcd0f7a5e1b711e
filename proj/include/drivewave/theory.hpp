#pragma once

#include <optional>
#include <string_view>

#include "drivewave/models.hpp"

namespace drivewave {

enum class AnalyticSign { Negative, Positive, Unknown };

enum class Clause { C1a, C1b, C1c, C2a, C2b, None };

std::string_view to_string(AnalyticSign s);
std::string_view to_string(Clause c);
AnalyticSign parse_analytic_sign(std::string_view text);
Clause parse_clause(std::string_view text);

struct SpeedBounds {
    std::optional<double> lower;
    std::optional<double> upper;
};

struct AnalyticVerdict {
    bool trivial_only = false;
    AnalyticSign sign = AnalyticSign::Unknown;
    Clause clause = Clause::None;
    SpeedBounds bounds;
};

/// Inequalities closer to equality than this count as unresolved.
inline constexpr double kTieSlack = 1e-12;

/// s > 1/2 and 0 < r <= (2s-1)/(2(1-s)).
bool theorem1_trivial(double s, double r);

/// Sign of the nontrivial wave speed for the logistic, survival-selection
/// drive. Clauses are tried in the order 1a, 1b, 1c, 2a, 2b; the first
/// match is reported.
AnalyticVerdict theorem2_sign(double s, double r);

/// theorem2_sign plus the trivial-wave flag; trivial-only cells carry the
/// lower bound c >= 2 sqrt(r).
AnalyticVerdict analytic_verdict(double s, double r);

/// Verdict for an arbitrary model: only the logistic survival drive in the
/// density or frequency formulation has one, everything else is Unknown.
AnalyticVerdict analytic_verdict(const ModelSpec& model);

/// (2-3s)/sqrt(2s); throws std::domain_error for s <= 0.
double cubic_speed(double s);

double kpp_speed(double r);

/// Bound on the rightward spread of the drive; none when the trivial-wave criterion holds.
std::optional<double> spreading_upper_bound(double s, double r);

/// Integral of the scalar reaction over p in [0, 1].
double scalar_reaction_integral(System tag, double s);

/// Root in s of scalar_reaction_integral by bisection (to 1e-4 or better).
double scalar_zero_level(System tag);

inline double tsn_zero_level() { return scalar_zero_level(System::ScalarTSN); }

}  // namespace drivewave
