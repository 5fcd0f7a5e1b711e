#include "drivewave/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "drivewave/csv.hpp"

namespace drivewave {

double SweepAxis::value(std::size_t i) const {
    if (count < 2) return min;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void apply_axis(ModelSpec& model, const std::string& name, double v) {
    if (name == "s")
        model.s = v;
    else if (name == "r")
        model.demography.r = v;
    else if (name == "a")
        model.demography.a = v;
    else if (name == "f_w")
        model.wolbachia.f_w = v;
    else if (name == "one_minus_f_w")
        model.wolbachia.f_w = 1.0 - v;
    else if (name == "omega_H")
        model.wolbachia.omega_H = v;
    else
        throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

std::size_t default_worker_count() {
    if (const char* env = std::getenv("DRIVEWAVE_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SimConfig cell_config(const SweepConfig& config, std::size_t i1, std::size_t i2) {
    SimConfig c = config.sim;
    apply_axis(c.model, config.axis1.name, config.axis1.value(i1));
    apply_axis(c.model, config.axis2.name, config.axis2.value(i2));
    c.snapshot_times = uniform_snapshot_times(c.t_final, config.snapshot_every);
    return c;
}

void validate(const SweepConfig& config) {
    const std::pair<const SweepAxis*, const char*> axes[] = {{&config.axis1, "sweep.axis1"},
                                                              {&config.axis2, "sweep.axis2"}};
    for (const auto& [ax, key] : axes) {
        if (ax->count < 2) throw std::invalid_argument(std::string(key) + ".count: must be at least 2");
        if (!(ax->max > ax->min)) throw std::invalid_argument(std::string(key) + ".max: must exceed min");
        ModelSpec probe = config.sim.model;
        try {
            apply_axis(probe, ax->name, ax->min);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string(key) + ".name: " + e.what());
        }
    }
    if (config.axis1.name == config.axis2.name) throw std::invalid_argument("sweep.axis2.name: axes must differ");
    if (!(config.snapshot_every > 0.0)) throw std::invalid_argument("sweep.snapshot_every: must be positive");
    if (!(config.kpp_horizon_factor >= 1.0))
        throw std::invalid_argument("sweep.kpp_horizon_factor: must be at least 1");
    if (config.workers == 0) throw std::invalid_argument("sweep.workers: must be positive");
    for (std::size_t i1 : {std::size_t{0}, config.axis1.count - 1})
        for (std::size_t i2 : {std::size_t{0}, config.axis2.count - 1}) validate(cell_config(config, i1, i2));
}

namespace {

WaveReport measure(const SimConfig& sim, const WaveTolerances& tol) {
    const SimulationResult res = simulate(sim);
    return classify_wave(res.snapshots, sim.grid, sim.model, tol);
}

// Same dx and left wall; the right wall sits beyond where a front at the first
// measured speed would be at the extended horizon.
SimConfig extended_kpp_config(const SweepConfig& config, const SimConfig& sim, double speed) {
    SimConfig c = sim;
    const double factor = config.kpp_horizon_factor;
    c.t_final = sim.t_final * factor;
    c.snapshot_times = uniform_snapshot_times(c.t_final, config.snapshot_every * factor);
    const double dx = sim.grid.dx();
    const double reach = sim.initial.interface_x + 1.1 * std::abs(speed) * c.t_final + 2.0 * config.tolerances.boundary_margin;
    if (reach > sim.grid.x_max) {
        const auto intervals = static_cast<std::size_t>(std::ceil((reach - sim.grid.x_min) / dx));
        c.grid.nx = intervals + 1;
        c.grid.x_max = sim.grid.x_min + static_cast<double>(intervals) * dx;
    }
    return c;
}

}  // namespace

SweepCell run_cell(const SweepConfig& config, std::size_t i1, std::size_t i2) {
    SweepCell cell;
    cell.axis1 = config.axis1.value(i1);
    cell.axis2 = config.axis2.value(i2);
    SimConfig sim = cell_config(config, i1, i2);
    cell.verdict = analytic_verdict(sim.model);
    try {
        WaveReport rep = measure(sim, config.tolerances);
        if (rep.wave_class == WaveClass::TrivialKPP && config.kpp_horizon_factor > 1.0) {
            sim = extended_kpp_config(config, sim, rep.speed);
            rep = measure(sim, config.tolerances);
        }
        cell.speed = rep.speed;
        cell.fit_r2 = rep.fit_r2;
        cell.wave_class = rep.wave_class;
        cell.p_monotone = rep.p_monotone;
        cell.n_monotone = rep.n_monotone;
        cell.monotonic_count = static_cast<int>(rep.p_monotone) + static_cast<int>(rep.n_monotone);
        cell.plateau_n = rep.plateau_n;
        if (rep.h_table && !sim.model.is_scalar()) {
            cell.nsv = nsv_sign(*rep.h_table, sim.model.s, sim.model.demography.r);
            cell.energy = energy_sign(*rep.h_table, sim.model.s, sim.model.demography.r);
        }
    } catch (const std::exception& e) {
        // solver breakdown in one cell must not abort the sweep
        cell.wave_class = WaveClass::NotConverged;
        cell.error = e.what();
    }
    return cell;
}

std::vector<SweepCell> run_sweep(const SweepConfig& config) {
    validate(config);
    const std::size_t n1 = config.axis1.count;
    const std::size_t n2 = config.axis2.count;
    std::vector<SweepCell> cells(n1 * n2);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < cells.size(); k = next.fetch_add(1))
            cells[k] = run_cell(config, k / n2, k % n2);
    };
    const std::size_t count = std::min(config.workers, cells.size());
    if (count <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(count);
        for (std::size_t w = 0; w < count; ++w) pool.emplace_back(worker);
    }
    return cells;
}

AgreementReport agreement_report(const std::vector<SweepCell>& cells, double min_speed) {
    AgreementReport rep;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const SweepCell& c = cells[i];
        if (c.verdict.trivial_only) {
            ++rep.trivial_cells;
            if (c.wave_class == WaveClass::TrivialKPP) {
                ++rep.trivial_matches;
            } else {
                ++rep.mismatches;
                rep.mismatch_list.push_back(
                    {i, c.axis1, c.axis2, c.verdict.clause, "trivial-criterion cell classified " + std::string(to_string(c.wave_class))});
            }
        }
        if (c.wave_class == WaveClass::NotConverged || c.verdict.sign == AnalyticSign::Unknown) continue;
        if (!(std::abs(c.speed) > min_speed)) continue;
        ++rep.compared;
        const AnalyticSign measured = c.speed < 0.0 ? AnalyticSign::Negative : AnalyticSign::Positive;
        if (measured == c.verdict.sign) {
            ++rep.matches;
        } else {
            ++rep.mismatches;
            std::ostringstream why;
            why << "measured speed " << format_double(c.speed) << " against analytic " << to_string(c.verdict.sign);
            rep.mismatch_list.push_back({i, c.axis1, c.axis2, c.verdict.clause, why.str()});
        }
    }
    return rep;
}

std::vector<std::pair<double, double>> zero_crossings(const std::vector<SweepCell>& cells, std::size_t n1,
                                                      std::size_t n2) {
    if (cells.size() != n1 * n2) throw std::invalid_argument("zero_crossings: cell count does not match grid");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
        for (std::size_t i1 = 0; i1 + 1 < n1; ++i1) {
            const SweepCell& a = cells[i1 * n2 + i2];
            const SweepCell& b = cells[(i1 + 1) * n2 + i2];
            if (a.wave_class == WaveClass::NotConverged || b.wave_class == WaveClass::NotConverged) continue;
            if ((a.speed < 0.0) == (b.speed < 0.0)) continue;
            const double w = a.speed / (a.speed - b.speed);
            out.emplace_back(a.axis1 + w * (b.axis1 - a.axis1), a.axis2);
        }
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::string out =
        "axis1,axis2,speed,fit_r2,class,p_monotone,n_monotone,monotonic_count,plateau_n,trivial_only,analytic_sign,"
        "clause\n";
    for (const SweepCell& c : cells) {
        out += format_double(c.axis1) + ',' + format_double(c.axis2) + ',' + format_double(c.speed) + ',' +
               format_double(c.fit_r2) + ',' + std::string(to_string(c.wave_class)) + ',' +
               format_bool(c.p_monotone) + ',' + format_bool(c.n_monotone) + ',' +
               std::to_string(c.monotonic_count) + ',' + format_double(c.plateau_n) + ',' +
               format_bool(c.verdict.trivial_only) + ',' + std::string(to_string(c.verdict.sign)) + ',' +
               std::string(to_string(c.verdict.clause)) + '\n';
    }
    return out;
}

}  // namespace drivewave
