#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "jcarray/error.hpp"
#include "jcarray/params.hpp"
#include "jcarray/site_scattering.hpp"

namespace jcarray {

// Row-major 2x2 complex transfer matrix relating right/left-moving field
// amplitudes across a block; chains compose by matrix product.
struct TransferMatrix {
    complexd m11{1.0}, m12{}, m21{}, m22{1.0};

    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }

    complexd det() const { return m11 * m22 - m12 * m21; }

    friend bool operator==(const TransferMatrix&, const TransferMatrix&) = default;
};

enum class PhaseModel : std::uint8_t { Markovian, Dispersive };

struct LatticeSpec {
    int n_sites = 1;
    double l_over_lambda0 = 0.25;               // lattice constant in resonant wavelengths
    PhaseModel phase_model = PhaseModel::Markovian;
    double rho = 1e-3;                          // Gamma / omega_eg scale ratio

    friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

inline LatticeSpec validate(const LatticeSpec& s) {
    if (s.n_sites < 1) throw Error(errc::invalid_value, "n_sites must be >= 1");
    if (!(s.l_over_lambda0 > 0.0)) throw Error(errc::invalid_value, "l_over_lambda0 must be > 0");
    if (s.rho < 0.0) throw Error(errc::invalid_value, "rho must be >= 0");
    return s;
}

// Propagation phase across one lattice constant. Markovian: frequency-flat
// phi = 2 pi L/lambda0. Dispersive adds the detuned-wavenumber part qL, i.e.
// phi = 2 pi (L/lambda0)(1 + rho Delta).
inline double fiber_phase(const LatticeSpec& s, Detuning d) {
    const double base = 2.0 * std::numbers::pi * s.l_over_lambda0;
    if (s.phase_model == PhaseModel::Dispersive) return base * (1.0 + s.rho * d.delta);
    return base;
}

// Same phase rule for an arbitrary spacing (in lambda0 units); used by the
// disorder module where spacings vary per realization.
inline double phase_for_spacing(const LatticeSpec& s, double spacing_over_lambda0, Detuning d) {
    const double base = 2.0 * std::numbers::pi * spacing_over_lambda0;
    if (s.phase_model == PhaseModel::Dispersive) return base * (1.0 + s.rho * d.delta);
    return base;
}

// One block = site + fiber segment. Transfer matrix of a reciprocal
// scatterer with symmetric response (t' = t, r' = r, which holds here for
// real g and eta), combined with the diagonal fiber propagator:
//
//   [ (t^2 - r^2) e^{i phi} / t     r e^{-i phi} / t ]
//   [      -r e^{i phi} / t         e^{-i phi} / t   ]
//
// For lossless amplitudes (|t|^2 + |r|^2 = 1) this is identical to the
// familiar [[e^{i phi}/t*, -r* e^{-i phi}/t*], [-r e^{i phi}/t, e^{-i phi}/t]]
// form; unlike that form it stays a valid transfer matrix with losses.
// det == 1 by construction in both cases.
inline TransferMatrix block_matrix(const ScatteringAmplitudes& amps, double phi) {
    if (std::abs(amps.t) <= 1e-14)
        throw Error(errc::zero_transmission, "transfer formalism is singular at full reflection");
    const complexd e = std::polar(1.0, phi);
    const complexd em = std::polar(1.0, -phi);
    const complexd t = amps.t, r = amps.r;
    return {(t * t - r * r) * e / t, r * em / t, -r * e / t, em / t};
}

inline TransferMatrix cascade_power(const TransferMatrix& block, int n) {
    if (n < 1) throw Error(errc::empty_chain, "need at least one block");
    TransferMatrix acc;          // identity
    TransferMatrix base = block;
    int k = n;
    while (k > 0) {
        if (k & 1) acc = base * acc;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

// Ordered product of a chain of blocks; element 0 is the block nearest the
// input port (rightmost factor). Identical chains go through the
// repeated-squaring path.
inline TransferMatrix cascade(std::span<const TransferMatrix> blocks) {
    if (blocks.empty()) throw Error(errc::empty_chain, "empty block chain");
    bool identical = true;
    for (std::size_t i = 1; i < blocks.size(); ++i)
        if (!(blocks[i] == blocks[0])) {
            identical = false;
            break;
        }
    if (identical) return cascade_power(blocks[0], static_cast<int>(blocks.size()));
    TransferMatrix acc = blocks[0];
    for (std::size_t i = 1; i < blocks.size(); ++i) acc = blocks[i] * acc;
    return acc;
}

inline TransferMatrix cascade(const std::vector<TransferMatrix>& blocks) {
    return cascade(std::span<const TransferMatrix>(blocks));
}

// Left-incidence boundary inversion: impose (t_tot, 0) = M (1, r_tot), so
// r_tot = -m21/m22 and t_tot = det(M)/m22.
inline ScatteringAmplitudes extract_t_r(const TransferMatrix& total) {
    if (std::abs(total.m22) <= 1e-14)
        throw Error(errc::singular_extraction, "complete stop band: |m22| ~ 0");
    return ScatteringAmplitudes::from_t_r(total.det() / total.m22, -total.m21 / total.m22);
}

// One sweep sample. flag marks grid points where the transfer description is
// singular (full site reflection or a complete stop band); such points carry
// the limiting values T = 0 and the clamped |r|^2.
struct SpectrumPoint {
    double delta = 0.0;
    double T = 0.0;
    double R = 0.0;
    bool flag = false;
};

namespace detail {
// Site amplitudes for sweeps; the g = 0 removable corner is handled inside
// t_r_general, so only true full-reflection points surface as flags.
inline ScatteringAmplitudes sweep_site_amps(const CqedParams& p, Detuning d) {
    return t_r_general(p, d);
}

// Stable extraction for chains of unit-determinant blocks: det of the total
// is exactly 1 analytically, while forming it from the entries loses all
// precision once |m22| grows large inside a stop band.
inline SpectrumPoint extract_unit_det(const TransferMatrix& m, double delta) {
    if (std::abs(m.m22) <= 1e-14) return {delta, 0.0, 1.0, true};
    const double T = std::norm(1.0 / m.m22);
    const double R = std::norm(m.m21 / m.m22);
    return {delta, T, R, false};
}
} // namespace detail

// Net (T, R) of N identical periodically spaced blocks over a uniform
// detuning grid. Singular points are flagged, never dropped.
inline std::vector<SpectrumPoint> array_spectrum(const CqedParams& p, const LatticeSpec& s,
                                                 double delta_lo, double delta_hi, int n_points) {
    if (n_points < 2) throw Error(errc::invalid_value, "n_points must be >= 2");
    validate(s);
    std::vector<SpectrumPoint> out;
    out.reserve(static_cast<std::size_t>(n_points));
    const double h = (delta_hi - delta_lo) / (n_points - 1);
    for (int k = 0; k < n_points; ++k) {
        const Detuning d{delta_lo + k * h};
        const ScatteringAmplitudes amps = detail::sweep_site_amps(p, d);
        if (std::abs(amps.t) <= 1e-14) {
            out.push_back({d.delta, 0.0, std::min(amps.R, 1.0), true});
            continue;
        }
        const TransferMatrix total = cascade_power(block_matrix(amps, fiber_phase(s, d)), s.n_sites);
        out.push_back(detail::extract_unit_det(total, d.delta));
    }
    return out;
}

} // namespace jcarray
