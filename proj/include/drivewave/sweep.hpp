#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "drivewave/models.hpp"
#include "drivewave/solver.hpp"
#include "drivewave/theory.hpp"
#include "drivewave/wave.hpp"

namespace drivewave {

/// Parameter names: s, r, a, f_w, one_minus_f_w, omega_H.
struct SweepAxis {
    std::string name = "s";
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 2;

    double value(std::size_t i) const;
    bool operator==(const SweepAxis&) const = default;
};

/// Sets the named parameter on `model`; throws std::invalid_argument for an
/// unknown name.
void apply_axis(ModelSpec& model, const std::string& name, double value);

struct SweepConfig {
    /// Template for every cell: grid, dt, t_final, initial data and the
    /// model without the swept parameters. snapshot_times is replaced by a
    /// uniform schedule with spacing snapshot_every.
    SimConfig sim = default_config(ModelSpec{});
    double snapshot_every = 1.0;
    /// A cell first classified TrivialKPP is measured again with t_final and
    /// the snapshot spacing multiplied by this factor, on a grid (same dx)
    /// extended to the right so the front stays clear of the wall. 1 disables.
    double kpp_horizon_factor = 3.0;
    SweepAxis axis1{"s", 0.3, 0.8, 25};
    SweepAxis axis2{"r", 0.1, 12.0, 25};
    WaveTolerances tolerances{};
    std::size_t workers = 1;
};

struct SweepCell {
    double axis1 = 0.0;
    double axis2 = 0.0;
    double speed = 0.0;
    double fit_r2 = 0.0;
    WaveClass wave_class = WaveClass::NotConverged;
    bool p_monotone = false;
    bool n_monotone = false;
    int monotonic_count = 0;
    double plateau_n = 0.0;
    AnalyticVerdict verdict;
    std::optional<double> nsv;
    std::optional<double> energy;
    std::string error;  // solver failure message, empty on success
};

/// DRIVEWAVE_WORKERS if set and positive, else the hardware concurrency.
std::size_t default_worker_count();

/// Throws std::invalid_argument for counts below 2, empty ranges, unknown
/// axis names or a cell configuration that fails validate().
void validate(const SweepConfig& config);

SimConfig cell_config(const SweepConfig& config, std::size_t i1, std::size_t i2);

SweepCell run_cell(const SweepConfig& config, std::size_t i1, std::size_t i2);

/// Row-major (axis1 outer) regardless of scheduling.
std::vector<SweepCell> run_sweep(const SweepConfig& config);

struct Mismatch {
    std::size_t index = 0;
    double axis1 = 0.0;
    double axis2 = 0.0;
    Clause clause = Clause::None;
    std::string reason;
};

struct AgreementReport {
    std::size_t compared = 0;
    std::size_t matches = 0;
    std::size_t mismatches = 0;
    std::size_t trivial_cells = 0;
    std::size_t trivial_matches = 0;
    std::vector<Mismatch> mismatch_list;
};

/// Sign check over converged cells with |speed| > min_speed and a definite
/// analytic sign; every cell meeting the trivial-wave criterion must be TrivialKPP.
AgreementReport agreement_report(const std::vector<SweepCell>& cells, double min_speed = 0.05);

/// Points where the measured speed changes sign between axis1-neighbours
/// (both converged), linearly interpolated in axis1. Returns (axis1, axis2).
std::vector<std::pair<double, double>> zero_crossings(const std::vector<SweepCell>& cells, std::size_t count1,
                                                      std::size_t count2);

std::string sweep_csv(const std::vector<SweepCell>& cells);

}  // namespace drivewave
