// Command-line front end: simulate, sweep, classify, stochastic, version.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drivewave/config.hpp"
#include "drivewave/csv.hpp"
#include "drivewave/solver.hpp"
#include "drivewave/stochastic.hpp"
#include "drivewave/sweep.hpp"
#include "drivewave/theory.hpp"
#include "drivewave/version.hpp"
#include "drivewave/wave.hpp"

namespace fs = std::filesystem;
using namespace drivewave;

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitSolverFailure = 3;

struct Invocation {
    std::string config_path;
    std::string grid;
    KeyValues flags;
};

const std::map<std::string, std::string>& aliases() {
    static const std::map<std::string, std::string> a = {
        {"--model", "model.system"},       {"--demography", "model.demography"},
        {"--selection", "model.selection"}, {"--s", "model.s"},
        {"--r", "model.r"},                 {"--a", "model.a"},
        {"--t-final", "solver.t_final"},    {"--seed", "stochastic.seed"},
        {"--workers", "sweep.workers"},     {"--out", "output.dir"},
    };
    return a;
}

CLI::App* add_run_command(CLI::App& app, const std::string& name, const std::string& help, Invocation& inv,
                          bool with_grid) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", inv.config_path, "key = value configuration file");
    if (with_grid) sub->add_option("--grid", inv.grid, "grid size as NxM");
    for (const auto& [flag, key] : aliases())
        sub->add_option_function<std::string>(flag, [&inv, key](const std::string& v) { inv.flags[key] = v; },
                                              "alias of --" + key);
    for (const auto& key : config_keys())
        sub->add_option_function<std::string>("--" + key, [&inv, key](const std::string& v) { inv.flags[key] = v; })
            ->group("Configuration keys");
    return sub;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("--config: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunConfig load(const Invocation& inv, const std::string& grid_key1, const std::string& grid_key2) {
    KeyValues kv;
    if (!inv.config_path.empty()) kv = parse_key_values(read_file(inv.config_path));
    for (const auto& [k, v] : inv.flags) kv[k] = v;
    if (!inv.grid.empty()) {
        static const std::regex pattern(R"((\d+)[xX](\d+))");
        std::smatch m;
        if (!std::regex_match(inv.grid, m, pattern)) throw std::invalid_argument("--grid: expected NxM, got '" + inv.grid + "'");
        kv[grid_key1] = m[1];
        kv[grid_key2] = m[2];
    }
    return resolve(kv);
}

fs::path prepare_output(const RunConfig& c) {
    fs::path dir(c.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + c.output_dir + "': " + ec.message());
    return dir;
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const RunConfig& c,
                    const std::vector<std::string>& outputs, double seconds) {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["version"] = kVersion;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    const KeyValues kv = to_key_values(c);
    for (const auto& key : config_keys()) cfg[key] = kv.at(key);
    j["config"] = cfg;
    j["outputs"] = outputs;
    j["wall_seconds"] = seconds;
    write_file((dir / "manifest.json").string(), j.dump(2) + "\n");
}

std::string data_row(const std::string& csv) {
    const auto nl = csv.find('\n');
    return nl == std::string::npos ? csv : csv.substr(nl + 1);
}

std::vector<std::string> cmd_simulate(const RunConfig& c, const fs::path& dir) {
    const SimConfig sim = simulation_config(c);
    const SimulationResult res = simulate(sim);
    const WaveReport rep = classify_wave(res.snapshots, sim.grid, sim.model, c.wave);
    std::vector<std::string> outputs;
    const auto emit = [&](const std::string& name, const std::string& text) {
        write_file((dir / name).string(), text);
        outputs.push_back((dir / name).string());
    };
    emit("snapshots.csv", snapshots_csv(res.snapshots, sim.grid));
    const std::string report = report_csv(rep, sim.model.s, sim.model.demography.r);
    emit("report.csv", report);
    if (rep.h_table) emit("h_table.csv", h_table_csv(*rep.h_table));
    std::cout << data_row(report);
    return outputs;
}

std::vector<std::string> cmd_sweep(const RunConfig& c, const fs::path& dir) {
    const SweepConfig cfg = sweep_config(c);
    const std::vector<SweepCell> cells = run_sweep(cfg);
    const std::string path = (dir / "sweep.csv").string();
    write_file(path, sweep_csv(cells));
    const AgreementReport rep = agreement_report(cells);
    std::size_t not_converged = 0;
    for (const auto& cell : cells) not_converged += cell.wave_class == WaveClass::NotConverged;
    std::cout << "cells=" << cells.size() << " not_converged=" << not_converged << " compared=" << rep.compared
              << " matches=" << rep.matches << " mismatches=" << rep.mismatches << " trivial=" << rep.trivial_matches
              << "/" << rep.trivial_cells << "\n";
    for (const auto& m : rep.mismatch_list)
        std::cout << "mismatch axis1=" << format_double(m.axis1) << " axis2=" << format_double(m.axis2)
                  << " clause=" << to_string(m.clause) << ": " << m.reason << "\n";
    return {path};
}

std::vector<std::string> cmd_classify(const RunConfig& c, const fs::path& dir) {
    const ModelSpec& m = c.sim.model;
    const AnalyticVerdict v = analytic_verdict(m);
    std::string row = format_double(m.s) + ',' + format_double(m.demography.r) + ',' + format_bool(v.trivial_only) +
                      ',' + std::string(to_string(v.sign)) + ',' + std::string(to_string(v.clause)) + ',' +
                      (v.bounds.lower ? format_double(*v.bounds.lower) : "") + ':' +
                      (v.bounds.upper ? format_double(*v.bounds.upper) : "") + '\n';
    const std::string path = (dir / "classify.csv").string();
    write_file(path, "s,r,trivial_only,sign,clause,bounds\n" + row);
    std::cout << row;
    return {path};
}

std::vector<std::string> cmd_stochastic(const RunConfig& c, const fs::path& dir) {
    const std::vector<StochasticCell> cells = stochastic_sweep(stochastic_sweep_config(c));
    const std::string csv = stochastic_csv(cells);
    const std::string path = (dir / "stochastic.csv").string();
    write_file(path, csv);
    std::cout << data_row(csv);
    return {path};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reaction-diffusion gene drive and Wolbachia wave laboratory"};
    app.require_subcommand(1);

    Invocation sim_inv, sweep_inv, classify_inv, stoch_inv;
    CLI::App* simulate_cmd = add_run_command(app, "simulate", "integrate one model and measure its wave", sim_inv, false);
    CLI::App* sweep_cmd = add_run_command(app, "sweep", "run a two-parameter grid of simulations", sweep_inv, true);
    CLI::App* classify_cmd = add_run_command(app, "classify", "evaluate the closed-form verdict", classify_inv, false);
    CLI::App* stoch_cmd = add_run_command(app, "stochastic", "run the deme-based stochastic model", stoch_inv, true);
    CLI::App* version_cmd = app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidConfig;
    }

    if (version_cmd->parsed()) {
        std::cout << "drivewave " << kVersion << "\n";
        return 0;
    }

    struct Route {
        CLI::App* cmd;
        Invocation* inv;
        std::vector<std::string> (*run)(const RunConfig&, const fs::path&);
        const char* grid1;
        const char* grid2;
    };
    const Route routes[] = {
        {simulate_cmd, &sim_inv, cmd_simulate, "", ""},
        {sweep_cmd, &sweep_inv, cmd_sweep, "sweep.axis1.count", "sweep.axis2.count"},
        {classify_cmd, &classify_inv, cmd_classify, "", ""},
        {stoch_cmd, &stoch_inv, cmd_stochastic, "stochastic.s_count", "stochastic.r_count"},
    };
    for (const Route& route : routes) {
        if (!route.cmd->parsed()) continue;
        const auto start = std::chrono::steady_clock::now();
        RunConfig config;
        try {
            config = load(*route.inv, route.grid1, route.grid2);
            if (route.cmd == simulate_cmd) validate(simulation_config(config));
            if (route.cmd == sweep_cmd) validate(sweep_config(config));
        } catch (const std::invalid_argument& e) {
            std::cerr << "invalid configuration: " << e.what() << "\n";
            return kExitInvalidConfig;
        }
        try {
            const fs::path dir = prepare_output(config);
            const std::vector<std::string> outputs = route.run(config, dir);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_manifest(dir, route.cmd->get_name(), config, outputs, seconds);
            return 0;
        } catch (const SolverError& e) {
            std::cerr << "solver failure at t = " << format_double(e.time()) << ": " << e.what() << "\n";
            return kExitSolverFailure;
        } catch (const std::invalid_argument& e) {
            std::cerr << "invalid configuration: " << e.what() << "\n";
            return kExitInvalidConfig;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 0;
}
