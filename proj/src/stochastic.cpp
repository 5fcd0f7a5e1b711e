#include "drivewave/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "drivewave/csv.hpp"

namespace drivewave {

std::string_view to_string(StochasticResult r) {
    switch (r) {
        case StochasticResult::DriveFixed: return "DriveFixed";
        case StochasticResult::DriveLost: return "DriveLost";
        case StochasticResult::Timeout: return "Timeout";
    }
    return "Timeout";
}

StochasticResult parse_stochastic_result(std::string_view text) {
    for (StochasticResult r : {StochasticResult::DriveFixed, StochasticResult::DriveLost, StochasticResult::Timeout})
        if (text == to_string(r)) return r;
    throw std::invalid_argument("unknown stochastic result '" + std::string(text) + "'");
}

void validate(const StochasticConfig& c) {
    if (c.deme_count < 2) throw std::invalid_argument("stochastic.demes: at least 2 demes are required");
    if (c.K < 1) throw std::invalid_argument("stochastic.K: must be at least 1");
    if (!(c.emigration_prob >= 0.0 && c.emigration_prob <= 1.0))
        throw std::invalid_argument("stochastic.emigration: must lie in [0, 1]");
    if (!(c.t_final >= 0.0) || !std::isfinite(c.t_final))
        throw std::invalid_argument("stochastic.t_final: must be finite and nonnegative");
    if (c.model.system != System::DensityDrive)
        throw std::invalid_argument("model.system: the stochastic model is a density drive");
    if (!(c.model.s >= 0.0 && c.model.s <= 1.0)) throw std::invalid_argument("model.s: must lie in [0, 1]");
    if (!(c.model.demography.r > 0.0)) throw std::invalid_argument("model.r: must be positive");
    for (double v : {c.left[0], c.left[1], c.right[0], c.right[1]})
        if (!(v >= 0.0 && v <= 5.0)) throw std::invalid_argument("stochastic initial fractions must lie in [0, 5]");
}

namespace {

// Sum tree over per-deme total rates; internal nodes are recomputed from
// their children on every update, so totals never drift.
class RateTree {
public:
    explicit RateTree(std::size_t n) : leaves_(std::bit_ceil(std::max<std::size_t>(n, 1))), node_(2 * leaves_, 0.0) {}

    void set(std::size_t i, double v) {
        std::size_t k = i + leaves_;
        node_[k] = v;
        for (k /= 2; k >= 1; k /= 2) node_[k] = node_[2 * k] + node_[2 * k + 1];
    }
    double total() const { return node_[1]; }

    std::size_t find(double u) const {
        std::size_t k = 1;
        while (k < leaves_) {
            if (u < node_[2 * k] || node_[2 * k + 1] <= 0.0) {
                k = 2 * k;
            } else {
                u -= node_[2 * k];
                k = 2 * k + 1;
            }
        }
        return k - leaves_;
    }

private:
    std::size_t leaves_;
    std::vector<double> node_;
};

struct Channels {
    double birth_D, birth_O, death_D, death_O;
    double total() const { return birth_D + birth_O + death_D + death_O; }
};

class Demes {
public:
    explicit Demes(const StochasticConfig& c) : c_(c), g_(c.model.genotype()), mix_(c.gene_conversion ? 2.0 : 1.0) {}

    Channels channels(std::uint32_t iD, std::uint32_t iO) const {
        const double d = iD, o = iO, N = d + o;
        if (N <= 0.0) return {0.0, 0.0, 0.0, 0.0};
        const double n = N / static_cast<double>(c_.K);
        const double B = std::max(birth_rate(c_.model.demography, n), 0.0);
        const double D = death_rate(c_.model.demography, n);
        return {d * g_.omega_D * g_.beta_D * B * (mix_ * o + g_.beta_D * d) / N,
                o * B * (o + (2.0 - mix_) * g_.beta_D * d) / N, d * g_.d_D * D, o * D};
    }

private:
    const StochasticConfig& c_;
    GenotypeParams g_;
    double mix_;
};

}  // namespace

StochasticOutcome run_stochastic(const StochasticConfig& c) {
    validate(c);
    const std::size_t M = c.deme_count;
    const double K = static_cast<double>(c.K);
    std::vector<std::uint32_t> iD(M), iO(M);
    for (std::size_t j = 0; j < M; ++j) {
        const auto& f = j < M / 2 ? c.left : c.right;
        iD[j] = static_cast<std::uint32_t>(std::llround(f[0] * K));
        iO[j] = static_cast<std::uint32_t>(std::llround(f[1] * K));
    }
    std::uint64_t total_D = 0, total_O = 0;
    for (std::size_t j = 0; j < M; ++j) {
        total_D += iD[j];
        total_O += iO[j];
    }
    const bool watch_D = total_D > 0;
    const bool watch_O = total_O > 0;
    const std::size_t cap = 5 * c.K;

    Demes demes(c);
    RateTree tree(M);
    for (std::size_t j = 0; j < M; ++j) tree.set(j, demes.channels(iD[j], iO[j]).total());

    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::poisson_distribution<int> offspring(1.0);

    StochasticOutcome out;
    double t = 0.0;
    for (std::size_t j = 0; j < M; ++j) out.max_deme_population = std::max<std::size_t>(out.max_deme_population, iD[j] + iO[j]);

    auto finish = [&](StochasticResult r) {
        out.result = r;
        if (r != StochasticResult::Timeout) out.extinction_time = t;
    };

    while (true) {
        if (watch_D && total_D == 0) {
            finish(StochasticResult::DriveLost);
            break;
        }
        if (watch_O && total_O == 0) {
            finish(StochasticResult::DriveFixed);
            break;
        }
        const double rate = tree.total();
        if (!(rate > 0.0)) {
            t = c.t_final;
            finish(StochasticResult::Timeout);
            break;
        }
        const double dt = -std::log1p(-unif(rng)) / rate;
        if (t + dt > c.t_final) {
            t = c.t_final;
            finish(StochasticResult::Timeout);
            break;
        }
        t += dt;
        ++out.events;

        const std::size_t j = tree.find(unif(rng) * rate);
        const Channels ch = demes.channels(iD[j], iO[j]);
        double u = unif(rng) * ch.total();
        std::size_t touched_lo = j, touched_hi = j;
        if (u < ch.birth_D + ch.birth_O) {
            const bool drive = u < ch.birth_D;
            const int k = offspring(rng);
            for (int b = 0; b < k; ++b) {
                std::size_t dest = j;
                if (unif(rng) < c.emigration_prob) {
                    if (j == 0)
                        dest = 1;
                    else if (j + 1 == M)
                        dest = M - 2;
                    else
                        dest = unif(rng) < 0.5 ? j - 1 : j + 1;
                }
                if (drive) {
                    ++iD[dest];
                    ++total_D;
                } else {
                    ++iO[dest];
                    ++total_O;
                }
                touched_lo = std::min(touched_lo, dest);
                touched_hi = std::max(touched_hi, dest);
                const std::size_t pop = iD[dest] + iO[dest];
                out.max_deme_population = std::max(out.max_deme_population, pop);
                if (pop > cap)
                    throw std::runtime_error("stochastic run exceeded 5K individuals in deme " + std::to_string(dest));
            }
        } else {
            u -= ch.birth_D + ch.birth_O;
            if (u < ch.death_D && iD[j] > 0) {
                --iD[j];
                --total_D;
            } else if (iO[j] > 0) {
                --iO[j];
                --total_O;
            } else {
                --iD[j];
                --total_D;
            }
        }
        for (std::size_t k = touched_lo; k <= touched_hi; ++k) tree.set(k, demes.channels(iD[k], iO[k]).total());
    }
    out.t_end = t;
    out.final_D = std::move(iD);
    out.final_O = std::move(iO);
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t index) {
    return splitmix64(base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1));
}

std::vector<StochasticCell> stochastic_sweep(const StochasticSweepConfig& config) {
    if (config.s_count < 1 || config.r_count < 1) throw std::invalid_argument("stochastic sweep: empty grid");
    if (config.workers == 0) throw std::invalid_argument("stochastic sweep: workers must be positive");
    auto axis = [](double lo, double hi, std::size_t n, std::size_t i) {
        return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    std::vector<StochasticCell> cells(config.s_count * config.r_count);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        cells[k].s = axis(config.s_min, config.s_max, config.s_count, k / config.r_count);
        cells[k].r = axis(config.r_min, config.r_max, config.r_count, k % config.r_count);
        cells[k].seed = cells.size() == 1 ? config.base.seed : cell_seed(config.base.seed, k);
        StochasticConfig probe = config.base;
        probe.model.s = cells[k].s;
        probe.model.demography.r = cells[k].r;
        validate(probe);
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < cells.size(); k = next.fetch_add(1)) {
            StochasticConfig run = config.base;
            run.model.s = cells[k].s;
            run.model.demography.r = cells[k].r;
            run.seed = cells[k].seed;
            try {
                cells[k].outcome = run_stochastic(run);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    const std::size_t count = std::min(config.workers, cells.size());
    if (count <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < count; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return cells;
}

std::string stochastic_csv(const std::vector<StochasticCell>& cells) {
    std::string out = "s,r,seed,result,extinction_time,events\n";
    for (const auto& c : cells) {
        out += format_double(c.s) + ',' + format_double(c.r) + ',' + std::to_string(c.seed) + ',' +
               std::string(to_string(c.outcome.result)) + ',' +
               (c.outcome.extinction_time ? format_double(*c.outcome.extinction_time) : std::string()) + ',' +
               std::to_string(c.outcome.events) + '\n';
    }
    return out;
}

}  // namespace drivewave
