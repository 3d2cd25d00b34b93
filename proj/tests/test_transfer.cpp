#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "jcarray/site_scattering.hpp"
#include "jcarray/transfer.hpp"

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

double max_entry_diff(const TransferMatrix& a, const TransferMatrix& b) {
    return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21),
                     std::abs(a.m22 - b.m22)});
}

ScatteringAmplitudes random_lossless_amps(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> rate(0.0, 5.0), det(-10.0, 10.0);
    for (;;) {
        const CqedParams p{rate(gen), 0.0, 0.0, rate(gen), 0.0, 1.0};
        const auto amps = t_r_general(p, Detuning{det(gen)});
        if (std::abs(amps.t) > 1e-6) return amps;
    }
}

} // namespace

TEST_CASE("block matrix anchors", "[transfer]") {
    const auto ident = block_matrix(ScatteringAmplitudes::from_t_r({1.0, 0.0}, {0.0, 0.0}), 0.0);
    CHECK(max_entry_diff(ident, TransferMatrix{}) < 1e-15);

    const auto pi_block = block_matrix(ScatteringAmplitudes::from_t_r({-1.0, 0.0}, {0.0, 0.0}), 0.0);
    CHECK(max_entry_diff(pi_block, TransferMatrix{-1.0, 0.0, 0.0, -1.0}) < 1e-15);

    CHECK(throws_code(errc::zero_transmission, [] {
        block_matrix(ScatteringAmplitudes::from_t_r({0.0, 0.0}, {0.0, 1.0}),
                     std::numbers::pi / 2);
    }));
}

TEST_CASE("lossless block equals the time-reversal-symmetric form", "[transfer]") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < 300; ++k) {
        const auto amps = random_lossless_amps(gen);
        const double phi = ph(gen);
        const auto blk = block_matrix(amps, phi);

        const complexd e = std::polar(1.0, phi), em = std::polar(1.0, -phi);
        const TransferMatrix symmetric{e / std::conj(amps.t),
                                       -std::conj(amps.r) * em / std::conj(amps.t),
                                       -amps.r * e / amps.t, em / amps.t};
        REQUIRE(max_entry_diff(blk, symmetric) < 1e-12);
        REQUIRE(std::abs(std::abs(blk.det()) - 1.0) < 1e-12);
    }
}

TEST_CASE("blocks have unit determinant with losses too", "[transfer]") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> rate(0.0, 5.0), det(-10.0, 10.0),
        ph(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < 300; ++k) {
        const CqedParams p{rate(gen), rate(gen), rate(gen), rate(gen), 0.0, 1.0};
        const auto amps = t_r_general(p, Detuning{det(gen)});
        if (std::abs(amps.t) < 1e-6) continue;
        const auto blk = block_matrix(amps, ph(gen));
        REQUIRE(std::abs(blk.det() - complexd(1.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("cascade basics", "[transfer]") {
    CHECK(throws_code(errc::empty_chain, [] { cascade(std::vector<TransferMatrix>{}); }));

    const TransferMatrix ident;
    CHECK(max_entry_diff(cascade(std::vector{ident}), ident) < 1e-15);

    const auto m = block_matrix(ScatteringAmplitudes::from_t_r({-1.0, 0.0}, {0.0, 0.0}), 0.0);
    CHECK(max_entry_diff(cascade(std::vector{m, m}), ident) < 1e-15);
}

TEST_CASE("cascade associativity and repeated squaring", "[transfer]") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);

    std::vector<TransferMatrix> chain;
    for (int k = 0; k < 9; ++k) chain.push_back(block_matrix(random_lossless_amps(gen), ph(gen)));

    const auto whole = cascade(chain);
    for (std::size_t cut = 1; cut < chain.size(); ++cut) {
        const std::vector<TransferMatrix> front(chain.begin(), chain.begin() + cut);
        const std::vector<TransferMatrix> back(chain.begin() + cut, chain.end());
        const auto split = cascade(std::vector{cascade(front), cascade(back)});
        REQUIRE(max_entry_diff(whole, split) < 1e-12);
    }

    const auto blk = block_matrix(random_lossless_amps(gen), ph(gen));
    for (int n : {1, 2, 3, 5, 10, 17, 33, 64}) {
        TransferMatrix seq = blk;
        for (int k = 1; k < n; ++k) seq = blk * seq;
        REQUIRE(max_entry_diff(cascade_power(blk, n), seq) < 1e-12);
    }
}

TEST_CASE("extraction", "[transfer]") {
    const auto unity = extract_t_r(TransferMatrix{});
    CHECK(std::abs(unity.t - complexd(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(unity.r) < 1e-15);

    std::mt19937_64 gen(14);
    for (int k = 0; k < 200; ++k) {
        const auto amps = random_lossless_amps(gen);
        const auto got = extract_t_r(block_matrix(amps, 0.0));
        REQUIRE(std::abs(got.t - amps.t) < 1e-12);
        REQUIRE(std::abs(got.r - amps.r) < 1e-12);
    }

    CHECK(throws_code(errc::singular_extraction, [] {
        extract_t_r(TransferMatrix{1.0, 0.0, 0.0, 0.0});
    }));
}

TEST_CASE("two blocks reproduce the multiple-reflection sum", "[transfer]") {
    std::mt19937_64 gen(15);
    std::uniform_real_distribution<double> ph(0.0, std::numbers::pi);
    for (int k = 0; k < 300; ++k) {
        const auto amps = random_lossless_amps(gen);
        const double phi = ph(gen);
        const auto two = extract_t_r(cascade_power(block_matrix(amps, phi), 2));
        const complexd e2 = std::polar(1.0, 2.0 * phi);
        const complexd fp = amps.t * amps.t * e2 / (1.0 - amps.r * amps.r * e2);
        REQUIRE(std::abs(two.t - fp) < 1e-10);
    }
}

TEST_CASE("array spectrum: one block is the bare site", "[transfer]") {
    const LatticeSpec spec{1, 0.25, PhaseModel::Markovian, 1e-3};
    for (const CqedParams& p : {CqedParams{0, 0, 0, 1, 0, 1}, CqedParams{0.25, 0.5, 0.5, 0, 0, 1},
                                CqedParams{5, 0.5, 0.5, 2, 4, 1}}) {
        const auto pts = array_spectrum(p, spec, -10.0, 10.0, 401);
        REQUIRE(pts.size() == 401);
        for (const auto& pt : pts) {
            if (pt.flag) continue;
            const auto site = t_r_general(p, Detuning{pt.delta});
            REQUIRE(pt.T == Catch::Approx(site.T).margin(1e-12));
            REQUIRE(pt.R == Catch::Approx(site.R).margin(1e-12));
        }
    }
}

TEST_CASE("array spectrum flags singular points instead of dropping them", "[transfer]") {
    // 2001 points over [-10, 10] include Delta = 0 exactly, where the case-1
    // site is a perfect mirror.
    const CqedParams case1{0, 0, 0, 1, 0, 1};
    const LatticeSpec spec{10, 0.25, PhaseModel::Markovian, 1e-3};
    const auto pts = array_spectrum(case1, spec, -10.0, 10.0, 2001);
    REQUIRE(pts.size() == 2001);
    const auto& centre = pts[1000];
    CHECK(centre.delta == 0.0);
    CHECK(centre.flag);
    CHECK(centre.T == 0.0);
    CHECK(centre.R == 1.0);
}

TEST_CASE("lossless cascades conserve probability", "[transfer]") {
    std::mt19937_64 gen(16);
    std::uniform_real_distribution<double> rate(0.0, 5.0);
    for (int n : {2, 5, 10}) {
        const LatticeSpec spec{n, 0.25, PhaseModel::Markovian, 1e-3};
        for (int k = 0; k < 8; ++k) {
            const CqedParams p{rate(gen), 0.0, 0.0, rate(gen), 0.0, 1.0};
            for (const auto& pt : array_spectrum(p, spec, -10.0, 10.0, 501)) {
                if (pt.flag) continue;
                REQUIRE(pt.T + pt.R == Catch::Approx(1.0).margin(1e-10));
            }
        }
    }
}

TEST_CASE("N = 10 keeps the single-site dip locations", "[transfer]") {
    const CqedParams case5{5, 0.5, 0.5, 2, 0, 1};
    const LatticeSpec spec10{10, 0.25, PhaseModel::Markovian, 1e-3};

    auto minima_of = [&](int n_sites) {
        const LatticeSpec spec{n_sites, 0.25, PhaseModel::Markovian, 1e-3};
        const auto pts = array_spectrum(case5, spec, -10.0, 10.0, 4001);
        std::vector<double> mins;
        for (std::size_t i = 1; i + 1 < pts.size(); ++i)
            if (pts[i].T + 1e-12 < pts[i - 1].T && pts[i].T + 1e-12 < pts[i + 1].T)
                mins.push_back(pts[i].delta);
        return mins;
    };

    const auto m1 = minima_of(1);
    const auto m10 = minima_of(10);
    REQUIRE(!m1.empty());
    for (double dip : m1) {
        double best = 1e9;
        for (double cand : m10) best = std::min(best, std::abs(cand - dip));
        REQUIRE(best <= 0.1);
    }
}

TEST_CASE("fiber phase models", "[transfer]") {
    const LatticeSpec markov{1, 0.25, PhaseModel::Markovian, 1e-3};
    CHECK(fiber_phase(markov, Detuning{123.0}) == Catch::Approx(std::numbers::pi / 2));

    const LatticeSpec disp0{1, 0.25, PhaseModel::Dispersive, 0.0};
    CHECK(fiber_phase(disp0, Detuning{7.0}) == Catch::Approx(std::numbers::pi / 2));

    const LatticeSpec disp{1, 0.5, PhaseModel::Dispersive, 1e-3};
    CHECK(fiber_phase(disp, Detuning{10.0}) == Catch::Approx(std::numbers::pi * 1.01));

    CHECK(throws_code(errc::invalid_value, [] {
        validate(LatticeSpec{0, 0.25, PhaseModel::Markovian, 1e-3});
    }));
    CHECK(throws_code(errc::invalid_value, [] {
        validate(LatticeSpec{1, 0.0, PhaseModel::Markovian, 1e-3});
    }));
}
