#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "drivewave/solver.hpp"
#include "drivewave/theory.hpp"
#include "drivewave/wave.hpp"

using namespace drivewave;

namespace {

ModelSpec drive(double s, double r) {
    ModelSpec m;
    m.system = System::DensityDrive;
    m.s = s;
    m.demography = {Demography::LogisticB_ConstD, r, 0.0};
    return m;
}

HTable constant_table(double value) {
    HTable t;
    for (std::size_t k = 0; k < kHTableSize; ++k) {
        t.V.push_back(static_cast<double>(k) / static_cast<double>(kHTableSize - 1));
        t.h.push_back(value);
    }
    return t;
}

WaveReport run(const ModelSpec& m) {
    const SimConfig c = default_config(m);
    const SimulationResult res = simulate(c);
    return classify_wave(res.snapshots, c.grid, m);
}

}  // namespace

TEST_CASE("class names round-trip") {
    for (WaveClass c : {WaveClass::TrivialKPP, WaveClass::NontrivialViable, WaveClass::NontrivialNonviable,
                        WaveClass::NotConverged})
        CHECK(parse_wave_class(to_string(c)) == c);
    CHECK_THROWS_AS(parse_wave_class("Trivial"), std::invalid_argument);
}

TEST_CASE("level set of a translated step") {
    const Grid1D grid{-50.0, 50.0, 1001};
    const double x0 = -3.3, c = 0.7;
    ModelSpec m = drive(0.5, 1.0);
    std::vector<FieldState> snaps;
    for (int k = 0; k <= 10; ++k) {
        FieldState st;
        st.t = k;
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double resident = grid.x(i) < x0 + c * st.t ? 1.0 : 0.0;
            st.u1.push_back(1.0 - resident);
            st.u2.push_back(resident);
        }
        snaps.push_back(st);
    }
    const auto track = track_level_set(snaps, grid, m, 0.5, 5.0);
    REQUIRE(track.size() == snaps.size());
    for (const LevelPoint& p : track) {
        CHECK(std::abs(p.x - (x0 + c * p.t)) <= grid.dx());
        CHECK(p.usable);
    }
    const SpeedFit fit = estimate_speed(track);
    CHECK(fit.speed == doctest::Approx(c).epsilon(0.02));
}

TEST_CASE("crossings near the walls are unusable") {
    const Grid1D grid{0.0, 10.0, 101};
    FieldState st;
    for (std::size_t i = 0; i < grid.nx; ++i) {
        st.u1.push_back(0.0);
        st.u2.push_back(grid.x(i) < 1.0 ? 1.0 : 0.0);
    }
    const std::vector<FieldState> snaps{st};
    const auto track = track_level_set(snaps, grid, drive(0.5, 1.0), 0.5, 2.0);
    REQUIRE(track.size() == 1);
    CHECK_FALSE(track[0].usable);
}

TEST_CASE("speed fit of a synthetic line") {
    std::vector<LevelPoint> track;
    for (int k = 0; k <= 40; ++k) track.push_back({k * 1.0, 3.0 - 0.4 * k, static_cast<std::size_t>(k), true});
    const SpeedFit fit = estimate_speed(track);
    CHECK(fit.speed == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(fit.fit_r2 == doctest::Approx(1.0));
    CHECK(fit.converged);
    CHECK(fit.points == 21);

    std::vector<LevelPoint> short_track(track.begin(), track.begin() + 6);
    CHECK_FALSE(estimate_speed(short_track).converged);
}

TEST_CASE("speed fit rejects a kinked track") {
    std::vector<LevelPoint> track;
    for (int k = 0; k <= 40; ++k) {
        const double x = k < 30 ? 0.0 : 10.0 * (k - 30);
        track.push_back({k * 1.0, x, static_cast<std::size_t>(k), true});
    }
    const SpeedFit fit = estimate_speed(track);
    CHECK(fit.fit_r2 < 0.99);
    CHECK_FALSE(fit.converged);
}

TEST_CASE("monotonicity check") {
    const std::vector<double> constant(20, 0.3);
    CHECK(monotonicity_check(constant, Direction::Increasing));
    CHECK(monotonicity_check(constant, Direction::Decreasing));

    std::vector<double> ramp;
    for (int i = 0; i < 20; ++i) ramp.push_back(0.1 * i);
    CHECK(monotonicity_check(ramp, Direction::Increasing));
    CHECK_FALSE(monotonicity_check(ramp, Direction::Decreasing));

    std::vector<double> wiggle = ramp;
    // two points wide: a centered difference cannot see a single-point sawtooth
    wiggle[10] = wiggle[11] = wiggle[9] - 0.05;
    CHECK_FALSE(monotonicity_check(wiggle, Direction::Increasing));

    // a dip far below epsilon times the steepest slope is tolerated
    std::vector<double> shelf = ramp;
    for (std::size_t i = 10; i < shelf.size(); ++i) shelf[i] = 0.9;
    shelf[12] = 0.9 - 1e-9;
    CHECK(monotonicity_check(shelf, Direction::Increasing));
    shelf[12] = 0.9 - 1e-5;
    CHECK_FALSE(monotonicity_check(shelf, Direction::Increasing));

    std::vector<double> noise(20, 0.0);
    noise[5] = 1e-14;
    CHECK(monotonicity_check(noise, Direction::Increasing));
    CHECK_FALSE(monotonicity_check(noise, Direction::Increasing, 1e-6, 0.0));

    CHECK_THROWS_AS(monotonicity_check(std::vector<double>{1.0, 2.0}, Direction::Increasing),
                    std::invalid_argument);
}

TEST_CASE("frequency profile is the exact ratio down to vanishing densities") {
    FieldState st;
    st.u1 = {0.0, 0.5, 1e-40, 0.0, 1e-300, 0.0};
    st.u2 = {1.0, 0.5, 1e-80, 0.0, 0.0, 0.0};
    const Profiles pr = wave_profiles(st, drive(0.5, 1.0));
    CHECK(pr.P[0] == 0.0);
    CHECK(pr.P[1] == 0.5);
    CHECK(pr.P[2] == doctest::Approx(1.0));
    CHECK(pr.P[3] == pr.P[2]);  // empty cell carries its left neighbour
    CHECK(pr.P[4] == 1.0);
    CHECK(pr.P[5] == 1.0);
    CHECK(pr.N[2] == 1e-40 + 1e-80);

    FieldState empty_left;
    empty_left.u1 = {0.0, 0.0, 0.3};
    empty_left.u2 = {0.0, 0.0, 0.1};
    const Profiles pl = wave_profiles(empty_left, drive(0.5, 1.0));
    CHECK(pl.P[0] == doctest::Approx(0.75));
    CHECK(pl.P[1] == doctest::Approx(0.75));
}

TEST_CASE("resident field and invader maximum per system") {
    FieldState st;
    st.u1 = {0.2, 0.6};
    st.u2 = {0.5, 1.0};
    ModelSpec freq = drive(0.5, 1.0);
    freq.system = System::FrequencyDrive;
    CHECK(resident_field(st, freq) == std::vector<double>{0.4, 0.4});
    CHECK(invader_max(st, freq) == doctest::Approx(0.6));
    CHECK(resident_field(st, drive(0.5, 1.0)) == std::vector<double>{0.5, 1.0});
    ModelSpec cubic;
    cubic.system = System::ScalarCubic;
    CHECK(resident_field(st, cubic)[0] == doctest::Approx(0.8));
}

TEST_CASE("h extraction") {
    SUBCASE("affine link is recovered exactly at table nodes") {
        std::vector<double> P, N;
        for (int i = 0; i <= 100; ++i) {
            P.push_back(i / 100.0);
            N.push_back(1.0 - 0.9 * (i / 100.0));
        }
        const auto t = extract_h(P, N);
        REQUIRE(t);
        REQUIRE(t->V.size() == kHTableSize);
        for (std::size_t k = 0; k < kHTableSize; ++k) CHECK(t->h[k] == doctest::Approx(1.0 - 0.9 * t->V[k]));
    }
    SUBCASE("endpoints extend the plateau values") {
        std::vector<double> P{0.2, 0.4, 0.6, 0.8}, N{0.9, 0.7, 0.5, 0.3};
        const auto t = extract_h(P, N);
        REQUIRE(t);
        CHECK(t->h.front() == doctest::Approx(0.9));
        CHECK(t->h.back() == doctest::Approx(0.3));
    }
    SUBCASE("small P range gives no table") {
        std::vector<double> P{0.0, 0.1, 0.2}, N{1.0, 1.0, 1.0};
        CHECK_FALSE(extract_h(P, N));
    }
    CHECK_THROWS_AS(extract_h(std::vector<double>{0.0}, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("uniform quadrature is exact for cubics") {
    for (std::size_t n : {4u, 5u, 6u, 7u, 12u, 513u}) {
        const double h = 2.0 / static_cast<double>(n - 1);
        std::vector<double> f;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -1.0 + h * i;
            f.push_back(x * x * x - 2.0 * x * x + 3.0);
        }
        CHECK(integrate_uniform(f, h) == doctest::Approx(6.0 - 4.0 / 3.0).epsilon(1e-12));
    }
    CHECK(integrate_uniform(std::vector<double>{1.0, 3.0}, 0.5) == doctest::Approx(1.0));
    CHECK(integrate_uniform(std::vector<double>{2.0}, 0.5) == 0.0);
}

TEST_CASE("numerical sign formulas with h = 1") {
    // h = 1 reduces the nsv integrand to a cubic: value s/4 - 1/6
    for (double s : {0.2, 0.5, 2.0 / 3.0, 0.75, 0.9})
        CHECK(nsv_sign(constant_table(1.0), s, 3.0) == doctest::Approx(s / 4.0 - 1.0 / 6.0).epsilon(1e-12));
    CHECK(std::abs(nsv_sign(constant_table(1.0), 2.0 / 3.0, 1.0)) < 1e-15);

    CHECK(std::abs(energy_sign(constant_table(1.0), 0.0, 2.0)) < 1e-15);
    const double s = 0.3, r = 5.0;
    const double n_star = 1.0 - s / (r * (1.0 - s));
    const double expected = r / 6.0 * (1.0 - (1.0 - s) * std::pow(n_star, 3)) - s * (r / 3.0 + 1.0) / 2.0;
    CHECK(energy_sign(constant_table(1.0), s, r) == doctest::Approx(expected).epsilon(1e-12));

    HTable bad;
    bad.V = {0.0, 1.0};
    bad.h = {1.0, 1.0};
    CHECK_THROWS_AS(nsv_sign(bad, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("reference parameters give a viable wave with the drive-only plateau") {
    const ModelSpec m = drive(0.5, 10.0 / 9.0);
    const WaveReport rep = run(m);
    CHECK(rep.wave_class == WaveClass::NontrivialViable);
    CHECK(rep.speed < -0.05);
    CHECK(rep.plateau_n == doctest::Approx(0.1).epsilon(0.1));
    CHECK(rep.p_monotone);
    CHECK(rep.n_monotone);
    REQUIRE(rep.h_table);
    CHECK(rep.h_table->h.front() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(rep.h_table->h.back() == doctest::Approx(0.1).epsilon(0.1));
    CHECK(nsv_sign(*rep.h_table, m.s, m.demography.r) < 0.0);
    CHECK(energy_sign(*rep.h_table, m.s, m.demography.r) < 0.0);
}

TEST_CASE("costless drive replaces without changing density") {
    const WaveReport rep = run(drive(0.0, 1.0));
    CHECK(rep.wave_class == WaveClass::NontrivialViable);
    CHECK(rep.plateau_n == doctest::Approx(1.0).epsilon(0.01));
    REQUIRE(rep.h_table);
    for (double h : rep.h_table->h) REQUIRE(std::abs(h - 1.0) < 0.02);
    CHECK(rep.p_monotone);
    CHECK(rep.n_monotone);
}

TEST_CASE("parameters meeting the trivial criterion give a KPP wave") {
    const WaveReport rep = run(drive(0.7, 0.5));
    CHECK(rep.wave_class == WaveClass::TrivialKPP);
    CHECK(rep.speed == doctest::Approx(kpp_speed(0.5)).epsilon(0.05));
    CHECK_FALSE(rep.h_table);
    CHECK(rep.p_monotone);
    CHECK(rep.n_monotone);
}

TEST_CASE("no time evolution cannot converge") {
    SimConfig c = default_config(drive(0.5, 1.0));
    c.t_final = 0.0;
    c.snapshot_times = {0.0};
    const SimulationResult res = simulate(c);
    CHECK(classify_wave(res.snapshots, c.grid, c.model).wave_class == WaveClass::NotConverged);
    CHECK_THROWS_AS(classify_wave(std::vector<FieldState>{}, c.grid, c.model), std::invalid_argument);
}
