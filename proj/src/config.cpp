#include "drivewave/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "drivewave/csv.hpp"

namespace drivewave {

namespace {

double to_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || errno == ERANGE)
        throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
    return d;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    if (v.empty() || v[0] == '-') throw std::invalid_argument(key + ": expected a nonnegative integer, got '" + v + "'");
    const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE)
        throw std::invalid_argument(key + ": expected a nonnegative integer, got '" + v + "'");
    return u;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument(key + ": expected true or false, got '" + v + "'");
}

template <class F>
auto wrap_parse(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        if (msg.rfind(key + ":", 0) == 0) throw;
        throw std::invalid_argument(key + ": " + msg);
    }
}

struct Field {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

Field real(std::string key, double RunConfig::*member) {
    return {key, [member](const RunConfig& c) { return format_double(c.*member); },
            [key, member](RunConfig& c, const std::string& v) { c.*member = to_double(key, v); }};
}

template <class Get>
Field real_at(std::string key, Get ref) {
    return {key, [ref](const RunConfig& c) { return format_double(ref(c)); },
            [key, ref](RunConfig& c, const std::string& v) { ref(c) = to_double(key, v); }};
}

template <class Get>
Field count_at(std::string key, Get ref) {
    return {key, [ref](const RunConfig& c) { return std::to_string(ref(c)); },
            [key, ref](RunConfig& c, const std::string& v) {
                ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(to_unsigned(key, v));
            }};
}

std::vector<Field> model_fields() {
    return {
        {"model.system", [](const RunConfig& c) { return std::string(to_string(c.sim.model.system)); },
         [](RunConfig& c, const std::string& v) {
             c.sim.model.system = wrap_parse("model.system", [&] { return parse_system(v); });
         }},
        {"model.demography",
         [](const RunConfig& c) { return std::string(to_string(c.sim.model.demography.variant)); },
         [](RunConfig& c, const std::string& v) {
             c.sim.model.demography.variant = wrap_parse("model.demography", [&] { return parse_demography(v); });
         }},
        {"model.selection", [](const RunConfig& c) { return std::string(to_string(c.sim.model.selection)); },
         [](RunConfig& c, const std::string& v) {
             c.sim.model.selection = wrap_parse("model.selection", [&] { return parse_selection(v); });
         }},
        real_at("model.s", [](auto& c) -> auto& { return c.sim.model.s; }),
        real_at("model.r", [](auto& c) -> auto& { return c.sim.model.demography.r; }),
        real_at("model.a", [](auto& c) -> auto& { return c.sim.model.demography.a; }),
        real_at("model.f_w", [](auto& c) -> auto& { return c.sim.model.wolbachia.f_w; }),
        real_at("model.omega_H", [](auto& c) -> auto& { return c.sim.model.wolbachia.omega_H; }),
    };
}

std::vector<Field> other_fields() {
    auto axis = [](const std::string& prefix, SweepAxis RunConfig::*ax) {
        return std::vector<Field>{
            {prefix + ".name", [ax](const RunConfig& c) { return (c.*ax).name; },
             [ax](RunConfig& c, const std::string& v) { (c.*ax).name = v; }},
            real_at(prefix + ".min", [ax](auto& c) -> auto& { return (c.*ax).min; }),
            real_at(prefix + ".max", [ax](auto& c) -> auto& { return (c.*ax).max; }),
            count_at(prefix + ".count", [ax](auto& c) -> auto& { return (c.*ax).count; }),
        };
    };
    std::vector<Field> f = {
        real_at("solver.x_min", [](auto& c) -> auto& { return c.sim.grid.x_min; }),
        real_at("solver.x_max", [](auto& c) -> auto& { return c.sim.grid.x_max; }),
        count_at("solver.nx", [](auto& c) -> auto& { return c.sim.grid.nx; }),
        real_at("solver.dt", [](auto& c) -> auto& { return c.sim.dt; }),
        real_at("solver.t_final", [](auto& c) -> auto& { return c.sim.t_final; }),
        real("solver.snapshot_every", &RunConfig::snapshot_every),
        real_at("initial.interface_x", [](auto& c) -> auto& { return c.sim.initial.interface_x; }),
        real_at("initial.left_u1", [](auto& c) -> auto& { return c.sim.initial.left[0]; }),
        real_at("initial.left_u2", [](auto& c) -> auto& { return c.sim.initial.left[1]; }),
        real_at("initial.right_u1", [](auto& c) -> auto& { return c.sim.initial.right[0]; }),
        real_at("initial.right_u2", [](auto& c) -> auto& { return c.sim.initial.right[1]; }),
        real_at("wave.level", [](auto& c) -> auto& { return c.wave.level; }),
        real_at("wave.boundary_margin", [](auto& c) -> auto& { return c.wave.boundary_margin; }),
        real_at("wave.window_fraction", [](auto& c) -> auto& { return c.wave.window_fraction; }),
        count_at("wave.min_points", [](auto& c) -> auto& { return c.wave.min_points; }),
        real_at("wave.min_r2", [](auto& c) -> auto& { return c.wave.min_r2; }),
        real_at("wave.p_trivial_tol", [](auto& c) -> auto& { return c.wave.p_trivial_tol; }),
        real_at("wave.monotone_eps", [](auto& c) -> auto& { return c.wave.monotone_eps; }),
        real_at("wave.plateau_fraction", [](auto& c) -> auto& { return c.wave.plateau_fraction; }),
    };
    for (auto& x : axis("sweep.axis1", &RunConfig::axis1)) f.push_back(std::move(x));
    for (auto& x : axis("sweep.axis2", &RunConfig::axis2)) f.push_back(std::move(x));
    std::vector<Field> rest = {
        real("sweep.snapshot_every", &RunConfig::sweep_snapshot_every),
        real("sweep.kpp_horizon_factor", &RunConfig::kpp_horizon_factor),
        count_at("sweep.workers", [](auto& c) -> auto& { return c.workers; }),
        count_at("stochastic.demes", [](auto& c) -> auto& { return c.stochastic.deme_count; }),
        count_at("stochastic.K", [](auto& c) -> auto& { return c.stochastic.K; }),
        real_at("stochastic.emigration", [](auto& c) -> auto& { return c.stochastic.emigration_prob; }),
        real_at("stochastic.t_final", [](auto& c) -> auto& { return c.stochastic.t_final; }),
        count_at("stochastic.seed", [](auto& c) -> auto& { return c.stochastic.seed; }),
        {"stochastic.gene_conversion",
         [](const RunConfig& c) { return std::string(format_bool(c.stochastic.gene_conversion)); },
         [](RunConfig& c, const std::string& v) {
             c.stochastic.gene_conversion = to_bool("stochastic.gene_conversion", v);
         }},
        real("stochastic.s_min", &RunConfig::stochastic_s_min),
        real("stochastic.s_max", &RunConfig::stochastic_s_max),
        count_at("stochastic.s_count", [](auto& c) -> auto& { return c.stochastic_s_count; }),
        real("stochastic.r_min", &RunConfig::stochastic_r_min),
        real("stochastic.r_max", &RunConfig::stochastic_r_max),
        count_at("stochastic.r_count", [](auto& c) -> auto& { return c.stochastic_r_count; }),
        {"output.dir", [](const RunConfig& c) { return c.output_dir; },
         [](RunConfig& c, const std::string& v) {
             if (v.empty()) throw std::invalid_argument("output.dir: must not be empty");
             c.output_dir = v;
         }},
    };
    for (auto& x : rest) f.push_back(std::move(x));
    return f;
}

const std::vector<Field>& fields() {
    static const std::vector<Field> all = [] {
        std::vector<Field> f = model_fields();
        for (auto& x : other_fields()) f.push_back(std::move(x));
        return f;
    }();
    return all;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : fields()) k.push_back(f.key);
        return k;
    }();
    return keys;
}

RunConfig default_run_config() {
    RunConfig c;
    c.workers = default_worker_count();
    return c;
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(number) + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(number) + ": empty key");
        kv[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

std::string format_key_values(const KeyValues& kv) {
    std::string out;
    for (const auto& key : config_keys()) {
        const auto it = kv.find(key);
        if (it != kv.end()) out += key + " = " + it->second + "\n";
    }
    for (const auto& [key, value] : kv)
        if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
            out += key + " = " + value + "\n";
    return out;
}

RunConfig resolve(const KeyValues& kv, RunConfig base) {
    for (const auto& [key, value] : kv)
        if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
            throw std::invalid_argument(key + ": unknown configuration key");

    bool model_changed = false;
    for (const auto& f : model_fields()) {
        const auto it = kv.find(f.key);
        if (it == kv.end()) continue;
        f.set(base, it->second);
        model_changed = true;
    }
    if (model_changed) base.sim.initial = default_initial(base.sim.model);
    for (const auto& f : fields()) {
        if (f.key.rfind("model.", 0) == 0) continue;
        const auto it = kv.find(f.key);
        if (it != kv.end()) f.set(base, it->second);
    }
    return base;
}

KeyValues to_key_values(const RunConfig& c) {
    KeyValues kv;
    for (const auto& f : fields()) kv[f.key] = f.get(c);
    return kv;
}

SimConfig simulation_config(const RunConfig& c) {
    SimConfig s = c.sim;
    s.snapshot_times = uniform_snapshot_times(s.t_final, c.snapshot_every);
    return s;
}

SweepConfig sweep_config(const RunConfig& c) {
    SweepConfig s;
    s.sim = c.sim;
    s.snapshot_every = c.sweep_snapshot_every;
    s.kpp_horizon_factor = c.kpp_horizon_factor;
    s.axis1 = c.axis1;
    s.axis2 = c.axis2;
    s.tolerances = c.wave;
    s.workers = c.workers;
    return s;
}

StochasticSweepConfig stochastic_sweep_config(const RunConfig& c) {
    StochasticSweepConfig s;
    s.base = c.stochastic;
    s.base.model = c.sim.model;
    s.s_count = c.stochastic_s_count;
    s.r_count = c.stochastic_r_count;
    s.s_min = c.stochastic_s_count == 1 ? c.sim.model.s : c.stochastic_s_min;
    s.s_max = c.stochastic_s_count == 1 ? c.sim.model.s : c.stochastic_s_max;
    s.r_min = c.stochastic_r_count == 1 ? c.sim.model.demography.r : c.stochastic_r_min;
    s.r_max = c.stochastic_r_count == 1 ? c.sim.model.demography.r : c.stochastic_r_max;
    s.workers = c.workers;
    return s;
}

}  // namespace drivewave
