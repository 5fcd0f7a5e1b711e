#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "drivewave/kernels.hpp"
#include "drivewave/models.hpp"
#include "drivewave/tridiagonal.hpp"

namespace drivewave {

struct Grid1D {
    double x_min = -200.0;
    double x_max = 600.0;
    std::size_t nx = 8001;

    double dx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }

    bool operator==(const Grid1D&) const = default;
};

/// Field roles by system: (nD, nO), (p, n), (nw, ns), or p alone (u2 empty).
struct FieldState {
    double t = 0.0;
    std::vector<double> u1;
    std::vector<double> u2;

    bool operator==(const FieldState&) const = default;
};

/// Sharp step: `left` values for x < interface_x, `right` values from the
/// interface on. Only the first entry is used by scalar systems.
struct InitialCondition {
    double interface_x = 0.0;
    std::array<double, 2> left{0.0, 1.0};
    std::array<double, 2> right{0.95, 0.05};

    bool operator==(const InitialCondition&) const = default;
};

struct SimConfig {
    Grid1D grid{};
    double dt = 0.02;
    double t_final = 200.0;
    std::vector<double> snapshot_times;
    InitialCondition initial{};
    ModelSpec model{};

    bool operator==(const SimConfig&) const = default;
};

/// Non-finite state after a step.
class SolverError : public std::runtime_error {
public:
    SolverError(double time, std::size_t cell, const std::string& what)
        : std::runtime_error(what), time_(time), cell_(cell) {}
    double time() const { return time_; }
    std::size_t cell() const { return cell_; }

private:
    double time_;
    std::size_t cell_;
};

struct SimulationResult {
    std::vector<FieldState> snapshots;
    double max_clip = 0.0;  // largest undershoot/overshoot removed by clipping
    std::size_t steps = 0;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const SimConfig& config);

/// 0, every, 2*every, ... up to and including t_final.
std::vector<double> uniform_snapshot_times(double t_final, double every);

/// Default domain and protocol for a model: grid [-200, 600] with dx = 0.1,
/// dt = 0.02, T = 200, the invader block on [0, 600], snapshots every 5.
SimConfig default_config(const ModelSpec& model);

InitialCondition default_initial(const ModelSpec& model);

FieldState initial_state(const SimConfig& config);

/// IMEX integrator: explicit reaction, implicit diffusion (and implicit
/// advection for the frequency systems), zero-flux boundaries.
class Solver {
public:
    explicit Solver(const SimConfig& config, const kernels::KernelTable& table = kernels::active_table());

    /// Advances `state` by one dt in place.
    void advance(FieldState& state);

    double max_clip() const { return max_clip_; }

private:
    void advance_frequency(FieldState& state);
    void finish(FieldState& state, std::span<double> u, bool frequency);

    SimConfig config_;
    const kernels::KernelTable* table_;
    TridiagonalFactor diffusion_;
    std::vector<double> work1_;
    std::vector<double> work2_;
    std::vector<double> sub_, diag_, sup_;
    double max_clip_ = 0.0;
};

/// One dt from `state` (does not modify it).
FieldState step(const FieldState& state, const SimConfig& config);

SimulationResult simulate(const SimConfig& config, const kernels::KernelTable& table = kernels::active_table());

}  // namespace drivewave
