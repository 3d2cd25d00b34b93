#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "jcarray/error.hpp"
#include "jcarray/params.hpp"

namespace jcarray {

namespace detail {
constexpr double kPoleTol = 1e-14;

// g = 0 reduction of the general closed form. The atomic factor cancels
// between numerator and denominator, which removes the 0/0 at
// tilde-Delta_eg = 0; the remaining denominator cannot vanish for real
// parameters with big_gamma > 0.
inline ScatteringAmplitudes t_r_decoupled_reduced(const CqedParams& p, Detuning d) {
    const complexd i(0.0, 1.0);
    const double G = p.big_gamma;
    const auto [dc, deg] = effective_detunings(p, d);
    (void)deg;
    const complexd den = (dc + i * G) * (dc + i * G) - p.eta * p.eta;
    const complexd t = (dc * dc + G * G - p.eta * p.eta) / den;
    const complexd r = -2.0 * i * G * p.eta / den;
    return ScatteringAmplitudes::from_t_r(t, r);
}
} // namespace detail

// Full closed-form transmission/reflection of one site.
//
//   t = [Dc (Deg Dc - 2|g|^2) + Deg (G^2 - |eta|^2) - 2|g|^2 eta] / den
//   r = -2iG (Deg eta + |g|^2) / den
//   den = (Dc + iG) {Deg (Dc + iG) - 2|g|^2} - 2|g|^2 eta - |eta|^2 Deg
//
// with Dc, Deg the complex effective detunings. Written with conjugates so
// that a complex eta or g would only be a field-type change.
inline ScatteringAmplitudes t_r_general(const CqedParams& p, Detuning d) {
    const complexd i(0.0, 1.0);
    const double G = p.big_gamma;
    const complexd g(p.g, 0.0), eta(p.eta, 0.0);
    const auto [dc, deg] = effective_detunings(p, d);
    const double g2 = std::norm(g), eta2 = std::norm(eta);

    const complexd den = (dc + i * G) * (deg * (dc + i * G) - 2.0 * g2) - 2.0 * g2 * eta - eta2 * deg;
    if (std::abs(den) < detail::kPoleTol) {
        // The only removable case is g = 0, where the atomic factor cancels.
        if (p.g == 0.0) return detail::t_r_decoupled_reduced(p, d);
        throw Error(errc::degenerate_denominator, "scattering denominator vanished (pole)");
    }
    const complexd t = (dc * (deg * dc - 2.0 * g2) + deg * (G * G - eta2) - 2.0 * g2 * eta) / den;
    const complexd r = -2.0 * i * G * (deg * eta + g2) / den;
    return ScatteringAmplitudes::from_t_r(t, r);
}

// Decoupled atom, no losses:  t = -(G^2 + D^2 - eta^2) / ((G - iD)^2 + eta^2)
inline ScatteringAmplitudes t_r_decoupled_lossless(const CqedParams& p, Detuning d) {
    if (p.g != 0.0 || p.kappa != 0.0 || p.gamma != 0.0 || p.delta_ac != 0.0)
        throw Error(errc::precondition_violation, "requires g = kappa = gamma = delta_ac = 0");
    const complexd i(0.0, 1.0);
    const double G = p.big_gamma, D = d.delta, eta = p.eta;
    const complexd den = (G - i * D) * (G - i * D) + eta * eta;
    const complexd t = -(G * G + D * D - eta * eta) / den;
    const complexd r = 2.0 * i * G * eta / den;
    return ScatteringAmplitudes::from_t_r(t, r);
}

// Decoupled atom with equal losses (gamma = kappa):
//   t = 1 - G/(G - i(D-eta) + kappa) - G/(G - i(D+eta) + kappa)
//   r = 2iG eta / ((G - i(D-eta) + kappa)(G - i(D+eta) + kappa))
inline ScatteringAmplitudes t_r_decoupled_lossy(const CqedParams& p, Detuning d) {
    if (p.g != 0.0 || p.delta_ac != 0.0 || p.gamma != p.kappa)
        throw Error(errc::precondition_violation, "requires g = delta_ac = 0 and gamma = kappa");
    const complexd i(0.0, 1.0);
    const double G = p.big_gamma, D = d.delta, eta = p.eta, k = p.kappa;
    const complexd a = G - i * (D - eta) + k;
    const complexd b = G - i * (D + eta) + k;
    const complexd t = 1.0 - G / a - G / b;
    const complexd r = 2.0 * i * G * eta / (a * b);
    return ScatteringAmplitudes::from_t_r(t, r);
}

// Coupled atom, no backscattering:
//   t = 1 - G/(G - iD + kappa) - G(gamma - iD) / (2g^2 + (gamma - iD)(G - iD + kappa))
//   r = 2 g^2 G / ((G - iD + kappa)(2g^2 + (gamma - iD)(G - iD + kappa)))
inline ScatteringAmplitudes t_r_coupled_no_backscatter(const CqedParams& p, Detuning d) {
    if (p.eta != 0.0 || p.delta_ac != 0.0)
        throw Error(errc::precondition_violation, "requires eta = delta_ac = 0");
    const complexd i(0.0, 1.0);
    const double G = p.big_gamma, D = d.delta;
    const complexd cav = G - i * D + p.kappa;
    const complexd atm = p.gamma - i * D;
    const complexd mix = 2.0 * p.g * p.g + atm * cav;
    const complexd t = 1.0 - G / cav - G * atm / mix;
    const complexd r = 2.0 * p.g * p.g * G / (cav * mix);
    return ScatteringAmplitudes::from_t_r(t, r);
}

// Probability amplitudes of the stationary single-excitation problem.
struct AmplitudeSolution {
    complexd t;
    complexd r;
    complexd e_a; // counterclockwise cavity mode
    complexd e_b; // clockwise cavity mode
    complexd e_q; // atomic excitation
};

// Independent route to (t, r): assemble the five stationary amplitude
// equations verbatim (including the one-half waveguide-field factors at the
// delta-function discontinuity) and solve by dense elimination with partial
// pivoting. V = sqrt(2 G v_g) with v_g = 1 in the unit convention.
inline AmplitudeSolution oracle_solve(const CqedParams& p, Detuning d) {
    const complexd i(0.0, 1.0);
    const double vg = 1.0;
    const double G = p.big_gamma;
    const complexd V(std::sqrt(2.0 * G * vg), 0.0);
    const complexd g(p.g, 0.0), eta(p.eta, 0.0);
    const auto [dc, deg] = effective_detunings(p, d);

    // unknowns x = (t, r, e_a, e_b, e_q)
    std::array<std::array<complexd, 6>, 5> m{}; // last column is the RHS
    m[0] = {-i * vg, 0.0, V, 0.0, 0.0, -i * vg};
    m[1] = {0.0, -i * vg, 0.0, V, 0.0, 0.0};
    m[2] = {std::conj(V) * 0.5, 0.0, -dc, eta, g, -std::conj(V) * 0.5};
    m[3] = {0.0, std::conj(V) * 0.5, std::conj(eta), -dc, std::conj(g), 0.0};
    m[4] = {0.0, 0.0, std::conj(g), g, -deg, 0.0};

    for (int col = 0; col < 5; ++col) {
        int piv = col;
        double best = std::abs(m[col][col]);
        for (int row = col + 1; row < 5; ++row) {
            if (std::abs(m[row][col]) > best) {
                best = std::abs(m[row][col]);
                piv = row;
            }
        }
        if (best < 1e-12)
            throw Error(errc::singular_system, "transport system is numerically singular");
        std::swap(m[col], m[piv]);
        for (int row = col + 1; row < 5; ++row) {
            const complexd f = m[row][col] / m[col][col];
            if (f == complexd{}) continue;
            for (int k = col; k < 6; ++k) m[row][k] -= f * m[col][k];
        }
    }
    std::array<complexd, 5> x;
    for (int row = 4; row >= 0; --row) {
        complexd acc = m[row][5];
        for (int k = row + 1; k < 5; ++k) acc -= m[row][k] * x[k];
        x[row] = acc / m[row][row];
    }
    return {x[0], x[1], x[2], x[3], x[4]};
}

// Modified Rabi splitting 2 sqrt(2 g^2 - G^2).
inline double rabi_splitting_prediction(const CqedParams& p) {
    const double disc = 2.0 * p.g * p.g - p.big_gamma * p.big_gamma;
    if (disc <= 0.0)
        throw Error(errc::subcritical_coupling, "requires 2 g^2 > big_gamma^2");
    return 2.0 * std::sqrt(disc);
}

namespace detail {
// Golden-section minimization of f on [a, b] to the given x-tolerance.
template <typename F>
double golden_min(F&& f, double a, double b, double xtol) {
    constexpr double gr = 0.6180339887498949; // (sqrt(5)-1)/2
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}
} // namespace detail

// Local minima of T(Delta) on [window_lo, window_hi]: uniform pre-scan of
// `grid` points, then golden-section refinement of each interior bracket.
// Returned detunings are sorted ascending.
inline std::vector<Detuning> find_transmission_minima(const CqedParams& p, double window_lo,
                                                      double window_hi, int grid) {
    if (!(window_lo < window_hi) || !std::isfinite(window_lo) || !std::isfinite(window_hi))
        throw Error(errc::empty_window, "window must be a finite non-empty interval");
    if (grid < 3) throw Error(errc::invalid_value, "grid must be >= 3");

    auto T = [&](double delta) { return t_r_general(p, Detuning{delta}).T; };

    const double h = (window_hi - window_lo) / (grid - 1);
    std::vector<double> vals(static_cast<std::size_t>(grid));
    for (int k = 0; k < grid; ++k) vals[static_cast<std::size_t>(k)] = T(window_lo + k * h);

    // Prominence floor keeps last-ulp jitter of flat spectra (e.g. the
    // all-pass case, T == 1 up to rounding) from registering as dips.
    constexpr double kProminence = 1e-12;
    std::vector<Detuning> minima;
    for (int k = 1; k + 1 < grid; ++k) {
        const auto i = static_cast<std::size_t>(k);
        if (vals[i] + kProminence < vals[i - 1] && vals[i] + kProminence < vals[i + 1]) {
            const double a = window_lo + (k - 1) * h;
            const double b = window_lo + (k + 1) * h;
            minima.push_back(Detuning{detail::golden_min(T, a, b, 1e-6)});
        }
    }
    std::sort(minima.begin(), minima.end(),
              [](const Detuning& a, const Detuning& b) { return a.delta < b.delta; });
    return minima;
}

} // namespace jcarray
