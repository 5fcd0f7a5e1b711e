#include "drivewave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace drivewave {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    throw std::invalid_argument(field + ": " + why);
}

bool is_density_field(const ModelSpec& m, int field) {
    if (m.is_scalar()) return false;
    if (m.is_frequency()) return field == 1;
    return true;
}

}  // namespace

void validate(const SimConfig& c) {
    if (c.grid.nx < 3) invalid("solver.nx", "needs at least 3 points");
    if (!(c.grid.x_max > c.grid.x_min)) invalid("solver.x_max", "must exceed solver.x_min");
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) invalid("solver.dt", "must be positive");
    if (!(c.t_final >= 0.0) || !std::isfinite(c.t_final)) invalid("solver.t_final", "must be nonnegative");
    for (double t : c.snapshot_times)
        if (!(t >= 0.0 && t <= c.t_final)) invalid("solver.snapshot_times", "must lie within [0, t_final]");

    const ModelSpec& m = c.model;
    if (!(m.s >= 0.0 && m.s <= 1.0)) invalid("model.s", "must lie in [0, 1]");
    if (m.system == System::ScalarTSN && m.s >= 1.0) invalid("model.s", "TSN requires s < 1");
    if (!(m.demography.r > 0.0) || !std::isfinite(m.demography.r)) invalid("model.r", "must be positive");
    if (m.demography.variant == Demography::AlleeB_ConstD && !(m.demography.a < 1.0))
        invalid("model.a", "Allee threshold must be below 1");
    if (m.demography.variant == Demography::ConstB_AlleeD && !(m.demography.a > -1.0 && m.demography.a < 1.0))
        invalid("model.a", "Allee threshold must lie in (-1, 1)");
    if (m.system == System::WolbachiaDensity) {
        if (!(m.wolbachia.f_w >= 0.0 && m.wolbachia.f_w <= 1.0)) invalid("model.f_w", "must lie in [0, 1]");
        if (!(m.wolbachia.omega_H >= 0.0 && m.wolbachia.omega_H <= 1.0))
            invalid("model.omega_H", "must lie in [0, 1]");
    }

    const int fields = m.is_scalar() ? 1 : 2;
    for (int f = 0; f < fields; ++f) {
        for (double v : {c.initial.left[f], c.initial.right[f]}) {
            const std::string name = "initial.u" + std::to_string(f + 1);
            if (!std::isfinite(v) || v < 0.0) invalid(name, "must be finite and nonnegative");
            if (!is_density_field(m, f) && v > 1.0) invalid(name, "frequencies must lie in [0, 1]");
        }
    }
}

std::vector<double> uniform_snapshot_times(double t_final, double every) {
    std::vector<double> times;
    if (!(every > 0.0)) return {0.0, t_final};
    const auto count = static_cast<long long>(std::floor(t_final / every + 1e-9));
    for (long long k = 0; k <= count; ++k) times.push_back(static_cast<double>(k) * every);
    if (times.back() < t_final) times.push_back(t_final);
    return times;
}

InitialCondition default_initial(const ModelSpec& model) {
    InitialCondition ic;
    ic.interface_x = 0.0;
    if (model.is_scalar()) {
        ic.left = {0.0, 0.0};
        ic.right = {0.95, 0.0};
    } else if (model.is_frequency()) {
        ic.left = {0.0, 1.0};
        ic.right = {0.95, 1.0};
    } else {
        ic.left = {0.0, 1.0};
        ic.right = {0.95, 0.05};
    }
    return ic;
}

SimConfig default_config(const ModelSpec& model) {
    SimConfig c;
    c.grid = Grid1D{-200.0, 600.0, 8001};
    c.dt = 0.02;
    c.t_final = 200.0;
    c.snapshot_times = uniform_snapshot_times(c.t_final, 5.0);
    c.initial = default_initial(model);
    c.model = model;
    return c;
}

FieldState initial_state(const SimConfig& c) {
    FieldState st;
    st.t = 0.0;
    const std::size_t nx = c.grid.nx;
    st.u1.resize(nx);
    if (!c.model.is_scalar()) st.u2.resize(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        const bool right = c.grid.x(i) >= c.initial.interface_x;
        const auto& v = right ? c.initial.right : c.initial.left;
        st.u1[i] = v[0];
        if (!st.u2.empty()) st.u2[i] = v[1];
    }
    return st;
}

Solver::Solver(const SimConfig& config, const kernels::KernelTable& table)
    : config_(config), table_(&table) {
    validate(config_);
    const std::size_t nx = config_.grid.nx;
    const double dx = config_.grid.dx();
    const double k = config_.dt / (dx * dx);
    sub_.assign(nx, -k);
    diag_.assign(nx, 1.0 + 2.0 * k);
    sup_.assign(nx, -k);
    // mirrored ghost values at both ends
    sup_[0] = -2.0 * k;
    sub_[nx - 1] = -2.0 * k;
    diffusion_ = TridiagonalFactor(sub_, diag_, sup_);
    work1_.resize(nx);
    work2_.resize(nx);
}

void Solver::finish(FieldState& state, std::span<double> u, bool frequency) {
    const kernels::ClipStats st = frequency ? table_->clip_unit(u) : table_->clip_nonnegative(u);
    if (!st.finite) {
        const auto bad = std::find_if(u.begin(), u.end(), [](double v) { return !std::isfinite(v); });
        const auto cell = static_cast<std::size_t>(bad - u.begin());
        std::ostringstream msg;
        msg << "non-finite value at cell " << cell << " (x = " << config_.grid.x(cell) << ") at t = " << state.t
            << "; reduce dt or dx";
        throw SolverError(state.t, cell, msg.str());
    }
    max_clip_ = std::max(max_clip_, st.max_clip);
}

void Solver::advance(FieldState& state) {
    const ModelSpec& m = config_.model;
    const double dt = config_.dt;
    state.t += dt;
    switch (m.system) {
        case System::DensityDrive:
        case System::WolbachiaDensity: {
            if (m.system == System::DensityDrive)
                table_->drive_explicit(m, dt, state.u1, state.u2, work1_, work2_);
            else
                table_->wolbachia_explicit(m, dt, state.u1, state.u2, work1_, work2_);
            diffusion_.solve(work1_, work2_);
            state.u1.swap(work1_);
            state.u2.swap(work2_);
            finish(state, state.u1, false);
            finish(state, state.u2, false);
            return;
        }
        case System::ScalarCubic:
        case System::ScalarTSN:
            table_->scalar_explicit(m, dt, state.u1, work1_);
            diffusion_.solve(work1_);
            state.u1.swap(work1_);
            finish(state, state.u1, true);
            return;
        case System::FrequencyDrive:
        case System::FrequencyDriveGCD:
            advance_frequency(state);
            return;
    }
}

// p_t = p_xx + 2 (log n)_x p_x + f(p, n),  n_t = n_xx + g(p, n)
void Solver::advance_frequency(FieldState& state) {
    const ModelSpec& m = config_.model;
    const double dt = config_.dt;
    const double dx = config_.grid.dx();
    const std::size_t nx = config_.grid.nx;
    auto& p = state.u1;
    auto& n = state.u2;

    for (std::size_t i = 0; i < nx; ++i) {
        const double nr = std::max(n[i], kDensityFloor);
        const FrequencyRates fr = frequency_reaction(m, std::clamp(p[i], 0.0, 1.0), nr);
        work1_[i] = p[i] + dt * fr.rate_p;
        work2_[i] = n[i] + dt * fr.rate_n;
    }

    // advection from the current (regularized) density, centered differences
    const double k = dt / (dx * dx);
    sub_[0] = 0.0;
    diag_[0] = 1.0 + 2.0 * k;
    sup_[0] = -2.0 * k;
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        const double grad_log =
            (std::log(std::max(n[i + 1], kDensityFloor)) - std::log(std::max(n[i - 1], kDensityFloor))) / (2.0 * dx);
        const double adv = 2.0 * grad_log * dt / (2.0 * dx);
        sub_[i] = -k + adv;
        diag_[i] = 1.0 + 2.0 * k;
        sup_[i] = -k - adv;
    }
    sub_[nx - 1] = -2.0 * k;
    diag_[nx - 1] = 1.0 + 2.0 * k;
    sup_[nx - 1] = 0.0;
    solve_tridiagonal(sub_, diag_, sup_, work1_);
    diffusion_.solve(work2_);

    p.swap(work1_);
    n.swap(work2_);
    finish(state, p, true);
    finish(state, n, false);
}

FieldState step(const FieldState& state, const SimConfig& config) {
    Solver solver(config);
    FieldState next = state;
    solver.advance(next);
    return next;
}

SimulationResult simulate(const SimConfig& config, const kernels::KernelTable& table) {
    Solver solver(config, table);
    SimulationResult result;
    const auto steps = static_cast<std::size_t>(std::llround(config.t_final / config.dt));

    std::vector<std::size_t> marks;
    for (double t : config.snapshot_times) marks.push_back(static_cast<std::size_t>(std::llround(t / config.dt)));
    marks.push_back(steps);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    FieldState state = initial_state(config);
    auto next_mark = marks.begin();
    if (*next_mark == 0) {
        result.snapshots.push_back(state);
        ++next_mark;
    }
    for (std::size_t k = 1; k <= steps; ++k) {
        solver.advance(state);
        state.t = static_cast<double>(k) * config.dt;
        if (next_mark != marks.end() && *next_mark == k) {
            result.snapshots.push_back(state);
            ++next_mark;
        }
    }
    result.max_clip = solver.max_clip();
    result.steps = steps;
    return result;
}

}  // namespace drivewave
