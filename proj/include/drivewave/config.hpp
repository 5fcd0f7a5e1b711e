#pragma once

#include <map>
#include <string>
#include <vector>

#include "drivewave/solver.hpp"
#include "drivewave/stochastic.hpp"
#include "drivewave/sweep.hpp"
#include "drivewave/wave.hpp"

namespace drivewave {

/// Everything a CLI run needs, addressable through flat dotted keys
/// (model.s, solver.dt, sweep.axis1.min, ...).
struct RunConfig {
    SimConfig sim = default_config(ModelSpec{});
    double snapshot_every = 5.0;
    WaveTolerances wave{};

    SweepAxis axis1{"s", 0.3, 0.8, 25};
    SweepAxis axis2{"r", 0.1, 12.0, 25};
    double sweep_snapshot_every = 1.0;
    double kpp_horizon_factor = 3.0;
    std::size_t workers = 1;

    StochasticConfig stochastic{};
    double stochastic_s_min = 0.3, stochastic_s_max = 0.8;
    std::size_t stochastic_s_count = 1;
    double stochastic_r_min = 0.5, stochastic_r_max = 8.0;
    std::size_t stochastic_r_count = 1;

    std::string output_dir = ".";

    bool operator==(const RunConfig&) const = default;
};

using KeyValues = std::map<std::string, std::string>;

/// Every recognised key, in a fixed order.
const std::vector<std::string>& config_keys();

/// Defaults with the worker count taken from default_worker_count().
RunConfig default_run_config();

/// `key = value` lines; blank lines and lines starting with '#' are
/// skipped. Throws std::invalid_argument naming the line on bad syntax.
KeyValues parse_key_values(const std::string& text);

std::string format_key_values(const KeyValues& kv);

/// Applies `kv` on top of `base`. model.* keys go first and reset the
/// initial data to the model's default before any initial.* key is read.
/// Throws std::invalid_argument naming the offending key.
RunConfig resolve(const KeyValues& kv, RunConfig base = default_run_config());

/// Fully expanded key set; resolve(to_key_values(c)) == c.
KeyValues to_key_values(const RunConfig& config);

SimConfig simulation_config(const RunConfig& config);
SweepConfig sweep_config(const RunConfig& config);
StochasticSweepConfig stochastic_sweep_config(const RunConfig& config);

}  // namespace drivewave
