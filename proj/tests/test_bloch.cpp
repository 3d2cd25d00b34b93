#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <random>

#include "jcarray/bloch.hpp"

using namespace jcarray;

namespace {

bool throws_code(errc expected, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == expected;
    }
    return false;
}

const LatticeSpec kSmallL{1, 0.05, PhaseModel::Dispersive, 0.02};
const LatticeSpec kLargeL{1, 0.5, PhaseModel::Dispersive, 0.02};

} // namespace

TEST_CASE("dispersion coefficients: hand-substituted anchor", "[bloch]") {
    const auto k = abcd(CqedParams{0, 0, 0, 0, 0, 1}, Detuning{1.0});
    CHECK(k.a == Catch::Approx(2.0).margin(1e-15));
    CHECK(k.b == 0.0);
    CHECK(k.c == Catch::Approx(0.0).margin(1e-15));
    CHECK(k.d == Catch::Approx(2.0).margin(1e-15));
}

TEST_CASE("B vanishes identically without losses", "[bloch]") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> rate(0.0, 5.0), dac(-5.0, 5.0), det(-10.0, 10.0);
    for (int k = 0; k < 2000; ++k) {
        const CqedParams p{rate(gen), 0.0, 0.0, rate(gen), dac(gen), 1.0};
        CHECK(abcd(p, Detuning{det(gen)}).b == 0.0);
    }
}

TEST_CASE("trace route equals polynomial route", "[bloch]") {
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> rate(0.0, 5.0), dac(-5.0, 5.0), det(-10.0, 10.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const CqedParams p{rate(gen), 0.0, 0.0, rate(gen), dac(gen), 1.0};
        const LatticeSpec spec{1, k % 2 ? 0.05 : 0.5, PhaseModel::Dispersive, 1e-3};
        const double omega = 1.0 + spec.rho * det(gen);
        try {
            worst = std::max(worst, std::abs(cos_kl_from_t(p, spec, omega) -
                                             cos_kl_from_abcd(p, spec, omega)));
        } catch (const Error&) {
            continue; // full-reflection or degenerate pole, excluded by both routes
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("route preconditions and degeneracies", "[bloch]") {
    CHECK(throws_code(errc::lossy_params, [] {
        cos_kl_from_t(CqedParams{1, 0.5, 0, 0, 0, 1}, kSmallL, 1.01);
    }));
    // full reflection: 1/t undefined
    CHECK(throws_code(errc::zero_transmission, [] {
        cos_kl_from_t(CqedParams{0, 0, 0, 1, 0, 1}, kSmallL, 1.0);
    }));
    // A = B = 0 exactly at the trivial-site resonance
    CHECK(throws_code(errc::degenerate_abcd, [] {
        cos_kl_from_abcd(CqedParams{0, 0, 0, 0, 0, 1}, kSmallL, 1.0);
    }));
    CHECK(throws_code(errc::invalid_value, [] {
        cos_kl_from_t(CqedParams{0, 0, 0, 1, 0, 1},
                      LatticeSpec{1, 0.05, PhaseModel::Markovian, 0.0}, 1.01);
    }));
}

TEST_CASE("bloch samples expose propagating flag consistently", "[bloch]") {
    const CqedParams p{5, 0, 0, 2, 0, 1};
    for (double w : {0.9, 0.99, 1.003, 1.05, 1.2}) {
        const auto s = bloch_sample(p, kSmallL, w);
        CHECK(s.omega_over_omega_eg == w);
        CHECK(s.propagating == (std::abs(s.rhs) <= 1.0));
        CHECK(s.q_l == Catch::Approx(2.0 * std::numbers::pi * 0.05 * (w - 1.0)));
    }
}

TEST_CASE("unit-modulus transmission forbids gaps", "[bloch]") {
    CHECK(find_band_gaps(CqedParams{0, 0, 0, 0, 0, 1}, kSmallL, 0.75, 1.25, 4000).empty());
    CHECK(find_band_gaps(CqedParams{0, 0, 0, 0, 0, 1}, kLargeL, 0.75, 1.25, 4000).empty());
}

TEST_CASE("backscattering opens a gap around resonance", "[bloch]") {
    const auto gaps = find_band_gaps(CqedParams{0, 0, 0, 1, 0, 1}, kSmallL, 0.75, 1.25, 4000);
    REQUIRE(!gaps.empty());
    bool straddles = false;
    for (const auto& g : gaps) straddles |= g.omega_lo < 1.0 && 1.0 < g.omega_hi;
    CHECK(straddles);
    for (const auto& g : gaps) CHECK(g.width == Catch::Approx(g.omega_hi - g.omega_lo));
}

TEST_CASE("gap edges and interior are sharp", "[bloch]") {
    const CqedParams p{5, 0, 0, 2, 0, 1};
    const auto gaps = find_band_gaps(p, kSmallL, 0.75, 1.25, 4000);
    REQUIRE(!gaps.empty());
    for (const auto& g : gaps) {
        // |rhs| = 1 at refined edges (evaluated where finite)
        for (double edge : {g.omega_lo, g.omega_hi}) {
            try {
                CHECK(std::abs(std::abs(cos_kl_from_abcd(p, kSmallL, edge)) - 1.0) < 1e-7);
            } catch (const Error&) {
                // edge can coincide with a non-propagating pole; acceptable
            }
        }
        // purity at 10x refinement: no propagating point strictly inside
        const int refine = 10;
        for (int k = 1; k < refine; ++k) {
            const double w = g.omega_lo + (g.omega_hi - g.omega_lo) * k / refine;
            try {
                REQUIRE(std::abs(cos_kl_from_abcd(p, kSmallL, w)) > 1.0);
            } catch (const Error&) {
                // poles count as non-propagating
            }
        }
    }

    CHECK(throws_code(errc::lossy_params, [] {
        find_band_gaps(CqedParams{1, 0.5, 0.5, 0, 0, 1}, kSmallL, 0.9, 1.1, 500);
    }));
    CHECK(throws_code(errc::invalid_value, [] {
        find_band_gaps(CqedParams{0, 0, 0, 1, 0, 1}, kSmallL, 0.9, 1.1, 99);
    }));
}
