#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "drivewave/models.hpp"
#include "drivewave/solver.hpp"

namespace drivewave {

enum class WaveClass { TrivialKPP, NontrivialViable, NontrivialNonviable, NotConverged };

std::string_view to_string(WaveClass c);
WaveClass parse_wave_class(std::string_view text);

enum class Direction { Increasing, Decreasing };

struct LevelPoint {
    double t = 0.0;
    double x = 0.0;
    std::size_t snapshot = 0;
    bool usable = false;
};

struct SpeedFit {
    double speed = 0.0;
    double fit_r2 = 0.0;
    std::size_t points = 0;
    bool converged = false;
};

struct WaveTolerances {
    double level = 0.5;
    double boundary_margin = 20.0;
    double window_fraction = 0.5;
    std::size_t min_points = 5;
    double min_r2 = 0.99;
    double p_trivial_tol = 1e-3;
    double monotone_eps = 1e-6;
    double plateau_fraction = 0.1;

    bool operator==(const WaveTolerances&) const = default;
};

/// N sampled against P on kHTableSize uniform nodes of [0, 1].
inline constexpr std::size_t kHTableSize = 512;

struct HTable {
    std::vector<double> V;
    std::vector<double> h;
};

struct WaveReport {
    double speed = 0.0;
    double fit_r2 = 0.0;
    WaveClass wave_class = WaveClass::NotConverged;
    bool p_monotone = false;
    bool n_monotone = false;
    double plateau_n = 0.0;
    std::optional<HTable> h_table;
    std::vector<LevelPoint> track;
};

/// The field whose level set is tracked: the resident (non-invading) density
/// nO, (1-p)n, ns, or 1-p for the scalar equations.
std::vector<double> resident_field(const FieldState& state, const ModelSpec& model);

/// Invader frequency P and total density N (N = 1 for scalar equations).
struct Profiles {
    std::vector<double> P;
    std::vector<double> N;
};
Profiles wave_profiles(const FieldState& state, const ModelSpec& model);

/// Largest invader density (nD, p n, nw) or frequency for scalar equations.
double invader_max(const FieldState& state, const ModelSpec& model);

/// Leftmost crossing of `level` per snapshot, linearly interpolated.
/// Snapshots without a crossing are omitted; crossings closer than
/// `boundary_margin` to either end are kept but marked unusable.
std::vector<LevelPoint> track_level_set(std::span<const FieldState> snapshots, const Grid1D& grid,
                                        const ModelSpec& model, double level = 0.5,
                                        double boundary_margin = 20.0);

/// Least-squares slope over the usable points whose time lies in the last
/// `window_fraction` of the usable time span.
SpeedFit estimate_speed(std::span<const LevelPoint> track, double window_fraction = 0.5,
                        std::size_t min_points = 5, double min_r2 = 0.99);

/// Profiles whose discrete derivative never exceeds flat_tol in magnitude
/// count as constant, hence monotone.
bool monotonicity_check(std::span<const double> profile, Direction direction, double epsilon = 1e-6,
                        double flat_tol = 1e-12);

/// Empty when the P range is below 0.5.
std::optional<HTable> extract_h(std::span<const double> P, std::span<const double> N);

WaveReport classify_wave(std::span<const FieldState> snapshots, const Grid1D& grid, const ModelSpec& model,
                         const WaveTolerances& tol = {});

/// Composite Simpson on an odd number of intervals, closing with the 3/8
/// rule on the last three.
double integrate_uniform(std::span<const double> values, double step);

/// Sign predicts the sign of c (drive-on-the-right convention, c < 0 viable).
double nsv_sign(const HTable& table, double s, double r);
double energy_sign(const HTable& table, double s, double r);

}  // namespace drivewave
