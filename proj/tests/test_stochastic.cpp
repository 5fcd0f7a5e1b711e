#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "drivewave/stochastic.hpp"

using namespace drivewave;

namespace {

StochasticConfig small(double s, double r, std::uint64_t seed) {
    StochasticConfig c;
    c.deme_count = 10;
    c.K = 50;
    c.model.s = s;
    c.model.demography.r = r;
    c.t_final = 2000.0;
    c.seed = seed;
    return c;
}

// two exchangeable halves: all-O on the left, all-D on the right
StochasticConfig neutral(std::uint64_t seed, bool conversion) {
    StochasticConfig c = small(0.0, 1.0, seed);
    c.deme_count = 4;
    c.K = 20;
    c.t_final = 1e6;
    c.left = {0.0, 1.0};
    c.right = {1.0, 0.0};
    c.gene_conversion = conversion;
    return c;
}

std::uint64_t sum(const std::vector<std::uint32_t>& v) { return std::accumulate(v.begin(), v.end(), std::uint64_t{0}); }

}  // namespace

TEST_CASE("result names round-trip") {
    for (StochasticResult r : {StochasticResult::DriveFixed, StochasticResult::DriveLost, StochasticResult::Timeout})
        CHECK(parse_stochastic_result(to_string(r)) == r);
    CHECK_THROWS_AS(parse_stochastic_result("Fixed"), std::invalid_argument);
}

TEST_CASE("configuration checks") {
    StochasticConfig c = small(0.3, 5.0, 1);
    CHECK_NOTHROW(validate(c));
    c.deme_count = 1;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = small(0.3, 5.0, 1);
    c.K = 0;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = small(0.3, 5.0, 1);
    c.emigration_prob = 1.5;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = small(0.3, 5.0, 1);
    c.model.system = System::ScalarCubic;
    CHECK_THROWS_AS(run_stochastic(c), std::invalid_argument);
}

TEST_CASE("fixed seed reproduces the run exactly") {
    const StochasticConfig c = small(0.4, 3.0, 7);
    const StochasticOutcome a = run_stochastic(c);
    const StochasticOutcome b = run_stochastic(c);
    CHECK(a == b);
    CHECK(a.events > 0);
    StochasticConfig other = c;
    other.seed = 8;
    CHECK(run_stochastic(other).events != a.events);
}

TEST_CASE("outcomes are consistent with final counts") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        for (double s : {0.2, 0.9}) {
            const StochasticOutcome o = run_stochastic(small(s, 4.0, seed));
            CHECK(o.final_D.size() == 10);
            CHECK(o.max_deme_population < 5 * 50);
            if (o.result == StochasticResult::DriveFixed) {
                CHECK(sum(o.final_O) == 0);
                CHECK(sum(o.final_D) > 0);
            }
            if (o.result == StochasticResult::DriveLost) CHECK(sum(o.final_D) == 0);
            if (o.result != StochasticResult::Timeout) {
                REQUIRE(o.extinction_time);
                CHECK(*o.extinction_time == o.t_end);
            }
        }
    }
}

TEST_CASE("cheap drive fixes, costly drive is lost") {
    int fixed = 0, lost = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        fixed += run_stochastic(small(0.2, 5.0, seed)).result == StochasticResult::DriveFixed;
        lost += run_stochastic(small(0.9, 5.0, seed)).result == StochasticResult::DriveLost;
    }
    CHECK(fixed == 5);
    CHECK(lost == 5);
}

TEST_CASE("an isolated all-drive population with an eradication drive collapses") {
    StochasticConfig c = small(0.8, 0.5, 3);
    c.deme_count = 2;
    c.emigration_prob = 0.0;
    c.left = {1.0, 0.0};
    c.right = {1.0, 0.0};
    const StochasticOutcome o = run_stochastic(c);
    CHECK(o.result == StochasticResult::DriveLost);
    CHECK(sum(o.final_O) == 0);
}

TEST_CASE("a horizon shorter than the first event times out") {
    StochasticConfig c = small(0.5, 1.0, 1);
    c.t_final = 0.0;
    const StochasticOutcome o = run_stochastic(c);
    CHECK(o.result == StochasticResult::Timeout);
    CHECK_FALSE(o.extinction_time);
    CHECK(o.events == 0);
}

TEST_CASE("without gene conversion a costless drive is a fair allele label") {
    constexpr int runs = 100;
    int fixed_plain = 0, fixed_converting = 0;
    for (int k = 0; k < runs; ++k) {
        const StochasticOutcome plain = run_stochastic(neutral(1000 + k, false));
        REQUIRE(plain.result != StochasticResult::Timeout);
        fixed_plain += plain.result == StochasticResult::DriveFixed;
        fixed_converting += run_stochastic(neutral(1000 + k, true)).result == StochasticResult::DriveFixed;
    }
    // binomial(100, 1/2) 95% interval
    CHECK(fixed_plain >= 40);
    CHECK(fixed_plain <= 60);
    CHECK(fixed_converting >= fixed_plain);
}

TEST_CASE("seed mixing") {
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(cell_seed(1, 0) != cell_seed(1, 1));
    CHECK(cell_seed(1, 0) != cell_seed(2, 0));
}

TEST_CASE("sweep layout, seeds and worker invariance") {
    StochasticSweepConfig c;
    c.base = small(0.5, 1.0, 11);
    c.s_count = 2;
    c.r_count = 3;
    const std::vector<StochasticCell> one = stochastic_sweep(c);
    REQUIRE(one.size() == 6);
    CHECK(one[0].s == 0.3);
    CHECK(one[5].s == 0.8);
    CHECK(one[1].r == doctest::Approx(4.25));
    CHECK(one[4].seed == cell_seed(11, 4));
    c.workers = 3;
    CHECK(stochastic_csv(one) == stochastic_csv(stochastic_sweep(c)));

    const std::string csv = stochastic_csv(one);
    CHECK(csv.rfind("s,r,seed,result,extinction_time,events\n", 0) == 0);

    c.s_count = 0;
    CHECK_THROWS_AS(stochastic_sweep(c), std::invalid_argument);
}

TEST_CASE("a 1x1 sweep is a single run with the base seed") {
    StochasticSweepConfig c;
    c.base = small(0.3, 5.0, 42);
    c.s_min = c.s_max = 0.3;
    c.r_min = c.r_max = 5.0;
    c.s_count = c.r_count = 1;
    const std::vector<StochasticCell> cells = stochastic_sweep(c);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].seed == 42);
    CHECK(cells[0].outcome == run_stochastic(c.base));
}
