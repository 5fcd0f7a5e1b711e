#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drivewave/models.hpp"

namespace drivewave {

enum class StochasticResult { DriveFixed, DriveLost, Timeout };

std::string_view to_string(StochasticResult r);
StochasticResult parse_stochastic_result(std::string_view text);

/// Deme-based drive model. Rates per deme with counts (iD, iO), N = iD+iO
/// and n = N/K:
///   D births  iD * omega_D beta_D B(n) (c iO + beta_D iD) / N, c = 2 with
///             gene conversion, 1 without
///   O births  iO * B(n) (iO + (2-c) beta_D iD) / N
///   D deaths  iD * d_D D(n),  O deaths  iO * D(n)
/// Each birth event yields Poisson(1) offspring of its genotype; each
/// offspring moves to a uniformly chosen adjacent deme with probability
/// emigration_prob (end demes have a single neighbour).
struct StochasticConfig {
    std::size_t deme_count = 100;
    std::size_t K = 1000;
    double emigration_prob = 0.1;
    ModelSpec model{};
    double t_final = 2000.0;
    std::uint64_t seed = 1;
    bool gene_conversion = true;
    /// Initial (D, O) counts as fractions of K in the left and right halves.
    std::array<double, 2> left{0.0, 1.0};
    std::array<double, 2> right{0.95, 0.05};

    bool operator==(const StochasticConfig&) const = default;
};

struct StochasticOutcome {
    StochasticResult result = StochasticResult::Timeout;
    std::optional<double> extinction_time;
    double t_end = 0.0;
    std::uint64_t events = 0;
    std::size_t max_deme_population = 0;
    std::vector<std::uint32_t> final_D;
    std::vector<std::uint32_t> final_O;

    bool operator==(const StochasticOutcome&) const = default;
};

void validate(const StochasticConfig& config);

/// Stops when an allele present at the start disappears (D is checked
/// first), or at t_final. Throws std::runtime_error if a deme exceeds 5K
/// individuals.
StochasticOutcome run_stochastic(const StochasticConfig& config);

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for cell `index` of a sweep: splitmix64(base + golden * (index+1)).
std::uint64_t cell_seed(std::uint64_t base, std::size_t index);

struct StochasticCell {
    double s = 0.0;
    double r = 0.0;
    std::uint64_t seed = 0;
    StochasticOutcome outcome;
};

struct StochasticSweepConfig {
    StochasticConfig base{};
    double s_min = 0.3, s_max = 0.8;
    std::size_t s_count = 5;
    double r_min = 0.5, r_max = 8.0;
    std::size_t r_count = 5;
    std::size_t workers = 1;
};

/// Row-major over (s outer, r inner), one run per cell.
std::vector<StochasticCell> stochastic_sweep(const StochasticSweepConfig& config);

/// Header `s,r,seed,result,extinction_time,events` (extinction_time blank
/// on Timeout).
std::string stochastic_csv(const std::vector<StochasticCell>& cells);

}  // namespace drivewave
