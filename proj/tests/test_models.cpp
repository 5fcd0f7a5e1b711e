#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "drivewave/models.hpp"

using namespace drivewave;

namespace {

ModelSpec survival_drive(double s, double r) {
    ModelSpec m;
    m.system = System::DensityDrive;
    m.s = s;
    m.demography = {Demography::LogisticB_ConstD, r, 0.0};
    return m;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

// eradication from the definition: no positive density with nonnegative
// drive-only growth, and negative growth at n = 0
bool eradication_oracle(const DemographySpec& d, double s) {
    return carrying_capacity(d, 1.0 - s) == 0.0 && (1.0 - s) * birth_rate(d, 0.0) - death_rate(d, 0.0) < 0.0;
}

}  // namespace

TEST_CASE("birth and death rates") {
    CHECK(birth_rate({Demography::LogisticB_ConstD, 10.0 / 9.0, 0}, 1.0) == doctest::Approx(1.0));
    CHECK(birth_rate({Demography::LogisticB_ConstD, 2.0, 0}, 0.0) == doctest::Approx(3.0));
    CHECK(birth_rate({Demography::AlleeB_ConstD, 1.0, 0.2}, 0.0) == doctest::Approx(0.8));
    CHECK(birth_rate({Demography::AlleeB_ConstD, 10.0, 0.5}, 0.0) == 0.0);
    CHECK(death_rate({Demography::LogisticB_ConstD, 5.0, 0}, 0.3) == 1.0);
    CHECK(death_rate({Demography::ConstB_LogisticD, 2.0, 0}, 0.5) == doctest::Approx(2.0));
    CHECK(death_rate({Demography::ConstB_AlleeD, 1.0, 0.2}, 1.0) == doctest::Approx(2.0));
    CHECK(birth_rate({Demography::ConstB_AlleeD, 3.0, 0.2}, 0.4) == doctest::Approx(4.0));
}

TEST_CASE("demography normalization on a grid") {
    for (Demography v : {Demography::LogisticB_ConstD, Demography::AlleeB_ConstD, Demography::ConstB_LogisticD,
                         Demography::ConstB_AlleeD}) {
        for (double r : {0.1, 1.0, 5.0, 12.0}) {
            for (double a : {-0.5, -0.2, 0.0, 0.2, 0.6}) {
                const DemographySpec d{v, r, a};
                CHECK(birth_rate(d, 1.0) == doctest::Approx(death_rate(d, 1.0)).epsilon(1e-14));
                for (double n : linspace(0.0, 1.0, 100)) {
                    CHECK(birth_rate(d, n) >= 0.0);
                    CHECK(death_rate(d, n) >= 1.0 - 1e-12);
                    if (n > std::max(0.0, a) && n < 1.0 && v != Demography::AlleeB_ConstD)
                        CHECK(birth_rate(d, n) - death_rate(d, n) > 0.0);
                }
            }
        }
    }
}

TEST_CASE("drive reaction examples") {
    const ModelSpec m = survival_drive(0.5, 10.0 / 9.0);
    const DriveRates wild = drive_reaction(m, 0.0, 1.0);
    CHECK(wild.rate_D == 0.0);
    CHECK(wild.rate_O == doctest::Approx(0.0).epsilon(1e-15));
    const DriveRates pure = drive_reaction(m, 0.1, 0.0);
    CHECK(pure.rate_O == 0.0);
    CHECK(pure.rate_D == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    const DriveRates empty = drive_reaction(m, 0.0, 0.0);
    CHECK(empty.rate_D == 0.0);
    CHECK(empty.rate_O == 0.0);
}

TEST_CASE("drive reaction against a direct transcription") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Selection sel : {Selection::Survival, Selection::Fecundity}) {
        for (double s : {0.3, 1.0}) {
            ModelSpec m = survival_drive(s, 2.0);
            m.selection = sel;
            const double omega = sel == Selection::Survival ? 1.0 - s : 1.0;
            const double beta = sel == Selection::Fecundity ? 1.0 - s : 1.0;
            for (int k = 0; k < 5; ++k) {
                const double nD = u(rng), nO = u(rng) + 0.01, n = nD + nO;
                const double B = 2.0 * (1.0 - n) + 1.0;
                const DriveRates got = drive_reaction(m, nD, nO);
                CHECK(got.rate_D == doctest::Approx(nD * (omega * beta * B * (2.0 * nO + beta * nD) / n - 1.0)));
                CHECK(got.rate_O == doctest::Approx(nO * (B * nO / n - 1.0)));
            }
        }
    }
}

TEST_CASE("frequency reaction examples") {
    ModelSpec m = survival_drive(0.5, 10.0 / 9.0);
    m.system = System::FrequencyDrive;
    CHECK(frequency_reaction(m, 0.0, 0.3).rate_p == 0.0);
    CHECK(frequency_reaction(m, 1.0, 1.0).rate_n == doctest::Approx(-0.5));
    m.s = 0.7;
    CHECK(frequency_reaction(m, 4.0 / 7.0, 1.0).rate_p == doctest::Approx(0.0).scale(1.0));
    CHECK(frequency_reaction(m, 0.5, 0.5).advection == doctest::Approx(4.0));
    CHECK_THROWS_AS(frequency_reaction(m, 0.5, 0.0), std::domain_error);
    m.system = System::FrequencyDriveGCD;
    CHECK(frequency_reaction(m, 0.3, 0.5).rate_p == doctest::Approx(scalar_reaction(System::ScalarTSN, 0.7, 0.3)));
}

TEST_CASE("density and frequency formulations agree by the chain rule") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double s = u(rng), r = 0.1 + 10.0 * u(rng);
        ModelSpec dm = survival_drive(s, r);
        ModelSpec fm = dm;
        fm.system = System::FrequencyDrive;
        const double nD = 1.5 * u(rng), nO = 1.5 * u(rng) + 1e-6;
        const double n = nD + nO, p = nD / n;
        const DriveRates d = drive_reaction(dm, nD, nO);
        const FrequencyRates f = frequency_reaction(fm, p, n);
        const double dn = d.rate_D + d.rate_O;
        const double dp = (d.rate_D - p * dn) / n;
        CHECK(f.rate_n == doctest::Approx(dn).scale(1.0).epsilon(1e-10));
        CHECK(f.rate_p == doctest::Approx(dp).scale(1.0).epsilon(1e-10));
    }
}

TEST_CASE("scalar reactions") {
    CHECK(scalar_reaction(System::ScalarCubic, 2.0 / 3.0, 0.5) == doctest::Approx(0.0).scale(1.0));
    CHECK(scalar_reaction(System::ScalarTSN, 0.5, 0.5) == doctest::Approx(0.1));
    CHECK(scalar_reaction(System::ScalarCubic, 0.5, 0.0) == 0.0);
    CHECK(scalar_reaction(System::ScalarCubic, 0.5, 1.0) == 0.0);
    CHECK_THROWS_AS(scalar_reaction(System::ScalarTSN, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(scalar_reaction(System::DensityDrive, 0.5, 0.5), std::domain_error);
    for (double s : linspace(0.0, 0.95, 20))
        for (double p : linspace(0.0, 1.0, 21)) {
            const double denom = 1.0 - s + s * (1.0 - p) * (1.0 - p);
            CHECK(scalar_reaction(System::ScalarTSN, s, p) * denom ==
                  doctest::Approx(scalar_reaction(System::ScalarCubic, s, p)).scale(1.0).epsilon(1e-14));
        }
}

TEST_CASE("wolbachia reaction") {
    const DemographySpec d{Demography::LogisticB_ConstD, 1.0, 0.0};
    const WolbachiaRates neutral = wolbachia_reaction({1.0, 1.0}, d, 0.5, 0.5);
    CHECK(neutral.rate_w == doctest::Approx(neutral.rate_s));
    const WolbachiaRates wild = wolbachia_reaction({0.9, 0.8}, d, 0.0, 1.0);
    CHECK(wild.rate_w == 0.0);
    CHECK(wild.rate_s == doctest::Approx(0.0).scale(1.0));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const DemographySpec d2{Demography::LogisticB_ConstD, 2.0, 0.0};
    for (int k = 0; k < 5; ++k) {
        const double nw = u(rng), ns = u(rng) + 0.01, n = nw + ns;
        const double pw = nw / n, ps = ns / n, B = 2.0 * (1.0 - n) + 1.0;
        const WolbachiaRates got = wolbachia_reaction({0.9, 0.8}, d2, nw, ns);
        CHECK(got.rate_w == doctest::Approx((pw * pw * 0.9 + pw * ps * 0.9) * B * n - nw));
        CHECK(got.rate_s == doctest::Approx((ps * ps + pw * ps * 0.8) * B * n - ns));
    }
}

TEST_CASE("carrying capacity") {
    CHECK(carrying_capacity({Demography::LogisticB_ConstD, 10.0 / 9.0, 0}, 0.5) == doctest::Approx(0.1));
    CHECK(carrying_capacity({Demography::LogisticB_ConstD, 0.5, 0}, 0.3) == 0.0);
    for (Demography v : {Demography::LogisticB_ConstD, Demography::AlleeB_ConstD, Demography::ConstB_LogisticD,
                         Demography::ConstB_AlleeD})
        CHECK(carrying_capacity({v, 3.0, 0.2}, 1.0) == doctest::Approx(1.0));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const DemographySpec d{static_cast<Demography>(k % 4), 0.1 + 12.0 * u(rng), -0.8 + 1.6 * u(rng)};
        double prev = 2.0;
        for (double s : linspace(0.0, 0.99, 20)) {
            const double cc = carrying_capacity(d, 1.0 - s);
            CHECK(cc <= prev + 1e-10);
            prev = cc;
        }
    }
}

TEST_CASE("eradication predicate") {
    CHECK(is_eradication_drive({Demography::LogisticB_ConstD, 0.5, 0}, 0.7));
    CHECK_FALSE(is_eradication_drive({Demography::LogisticB_ConstD, 10.0 / 9.0, 0}, 0.5));
    for (Demography v : {Demography::LogisticB_ConstD, Demography::AlleeB_ConstD, Demography::ConstB_LogisticD,
                         Demography::ConstB_AlleeD})
        CHECK_FALSE(is_eradication_drive({v, 2.0, 0.2}, 0.0));
}

TEST_CASE("eradication closed forms match the root finder on a 50x50 grid") {
    for (Demography v : {Demography::LogisticB_ConstD, Demography::AlleeB_ConstD, Demography::ConstB_LogisticD,
                         Demography::ConstB_AlleeD}) {
        for (double a : {-0.2, 0.2}) {
            int disagreements = 0;
            for (double s : linspace(0.02, 0.98, 50))
                for (double r : linspace(0.1, 12.0, 50)) {
                    const DemographySpec d{v, r, a};
                    disagreements += is_eradication_drive(d, s) != eradication_oracle(d, s);
                }
            CHECK(disagreements == 0);
        }
    }
}

TEST_CASE("thresholds and equilibria") {
    CHECK_FALSE(bistability_threshold(0.5).has_value());
    CHECK(*bistability_threshold(0.7) == doctest::Approx(4.0 / 7.0));
    CHECK(*bistability_threshold(1.0) == 1.0);
    CHECK(*wolbachia_equilibrium({1.0, 0.3}) == 0.0);
    CHECK(*wolbachia_equilibrium({0.9, 0.8}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_FALSE(wolbachia_equilibrium({0.5, 0.6}).has_value());
    CHECK_THROWS_AS(wolbachia_equilibrium({0.5, 1.0}), std::domain_error);
}

TEST_CASE("genotype constructors and names") {
    const GenotypeParams sv = GenotypeParams::survival_selection(0.3);
    CHECK(sv.omega_D == doctest::Approx(0.7));
    CHECK(sv.beta_D == 1.0);
    const GenotypeParams fc = GenotypeParams::fecundity_selection(0.3);
    CHECK(fc.beta_D == doctest::Approx(0.7));
    CHECK(fc.omega_D == 1.0);
    for (System s : {System::DensityDrive, System::FrequencyDrive, System::FrequencyDriveGCD, System::ScalarCubic,
                     System::ScalarTSN, System::WolbachiaDensity})
        CHECK(parse_system(to_string(s)) == s);
    for (Demography d : {Demography::LogisticB_ConstD, Demography::AlleeB_ConstD, Demography::ConstB_LogisticD,
                         Demography::ConstB_AlleeD})
        CHECK(parse_demography(to_string(d)) == d);
    CHECK(parse_selection("fecundity") == Selection::Fecundity);
    CHECK_THROWS_AS(parse_system("bogus"), std::invalid_argument);
}
