#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <tuple>
#include <vector>

#include "jcarray/error.hpp"
#include "jcarray/params.hpp"
#include "jcarray/site_scattering.hpp"
#include "jcarray/transfer.hpp"

namespace jcarray {

// The four real polynomials of the infinite-lattice dispersion relation,
//   cos(KL) = [cos(qL)(AC + BD) + sin(qL)(AD - BC)] / (A^2 + B^2),
// equivalently 1/t = (C + iD)/(A + iB). They are written in terms of the
// cavity detuning dc = Delta - delta_ac (so every dc + delta_ac below is the
// atomic detuning Delta); with the atomic detuning substituted directly the
// identity with Re[e^{-iqL}/t] breaks for delta_ac != 0.
struct DispersionCoeffs {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

inline DispersionCoeffs abcd(const CqedParams& p, Detuning det) {
    const double G = p.big_gamma, g = p.g, eta = p.eta, kap = p.kappa, gam = p.gamma;
    const double dac = p.delta_ac;
    const double dc = det.delta - dac;

    DispersionCoeffs o;
    o.a = -2.0 * g * g * (dc + eta) - 2.0 * gam * dc * kap - kap * kap * (dac + dc)
          + (dac + dc) * (G * G + dc * dc - eta * eta);
    o.b = -2.0 * g * g * kap + 2.0 * kap * dc * (dac + dc)
          + gam * (G * G + dc * dc - eta * eta - kap * kap);
    o.c = -G * G * (dac + dc) - 2.0 * gam * dc * kap - 2.0 * G * (gam * dc + kap * (dac + dc))
          - kap * kap * (dac + dc) + (dc + eta) * (-2.0 * g * g + (dac + dc) * (dc - eta));
    o.d = -2.0 * g * g * (G + kap) + 2.0 * dc * (dac + dc) * (G + kap)
          - gam * (-dc * dc + eta * eta + (G + kap) * (G + kap));
    return o;
}

namespace detail {
inline void require_lossless(const CqedParams& p) {
    if (!p.lossless())
        throw Error(errc::lossy_params, "Bloch analysis requires kappa = gamma = 0");
}

inline double require_positive_rho(const LatticeSpec& s) {
    if (!(s.rho > 0.0))
        throw Error(errc::invalid_value, "band-structure evaluation requires rho > 0");
    return s.rho;
}

// Map the omega/omega_eg axis onto (Delta in Gamma units, qL).
inline std::pair<Detuning, double> bloch_axes(const LatticeSpec& s, double omega_ratio) {
    const double rho = require_positive_rho(s);
    const Detuning d{(omega_ratio - 1.0) / rho};
    const double ql = 2.0 * std::numbers::pi * s.l_over_lambda0 * (omega_ratio - 1.0);
    return {d, ql};
}
} // namespace detail

// cos(KL) via the trace route, Re[e^{-iqL}/t].
inline double cos_kl_from_t(const CqedParams& p, const LatticeSpec& s, double omega_ratio) {
    detail::require_lossless(p);
    const auto [d, ql] = detail::bloch_axes(s, omega_ratio);
    const ScatteringAmplitudes amps = t_r_general(p, d);
    if (std::abs(amps.t) < 1e-14)
        throw Error(errc::zero_transmission, "1/t undefined at full reflection");
    return (std::polar(1.0, -ql) / amps.t).real();
}

// cos(KL) via the polynomial route.
inline double cos_kl_from_abcd(const CqedParams& p, const LatticeSpec& s, double omega_ratio) {
    const auto [d, ql] = detail::bloch_axes(s, omega_ratio);
    const DispersionCoeffs k = abcd(p, d);
    const double denom = k.a * k.a + k.b * k.b;
    if (denom <= 1e-20)
        throw Error(errc::degenerate_abcd, "A^2 + B^2 vanished");
    return (std::cos(ql) * (k.a * k.c + k.b * k.d) + std::sin(ql) * (k.a * k.d - k.b * k.c)) / denom;
}

// One point of the dispersion relation.
struct BlochSample {
    double omega_over_omega_eg = 0.0;
    double q_l = 0.0;
    double rhs = 0.0; // cos(KL)
    bool propagating = false;
    DispersionCoeffs abcd;
};

inline BlochSample bloch_sample(const CqedParams& p, const LatticeSpec& s, double omega_ratio) {
    const auto [d, ql] = detail::bloch_axes(s, omega_ratio);
    BlochSample out;
    out.omega_over_omega_eg = omega_ratio;
    out.q_l = ql;
    out.abcd = abcd(p, d);
    out.rhs = cos_kl_from_abcd(p, s, omega_ratio);
    out.propagating = std::abs(out.rhs) <= 1.0;
    return out;
}

// Forbidden interval: |cos(KL)| > 1 strictly inside.
struct BandGap {
    double omega_lo = 0.0;
    double omega_hi = 0.0;
    double width = 0.0;
};

namespace detail {
// |rhs| - 1, with degenerate/zero-transmission poles treated as deep inside
// a gap (they are non-propagating limits).
inline double gap_indicator(const CqedParams& p, const LatticeSpec& s, double omega_ratio) {
    try {
        return std::abs(cos_kl_from_abcd(p, s, omega_ratio)) - 1.0;
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
}
} // namespace detail

// Scan a half-step-offset grid of `grid` points for sign changes of |rhs|-1,
// bisect each edge down to machine-level brackets (location tolerance well
// below 1e-9 in omega_ratio), and merge produced intervals separated by less
// than one grid step.
inline std::vector<BandGap> find_band_gaps(const CqedParams& p, const LatticeSpec& s,
                                           double omega_lo, double omega_hi, int grid) {
    detail::require_lossless(p);
    if (grid < 100) throw Error(errc::invalid_value, "grid must be >= 100");
    if (!(omega_lo < omega_hi)) throw Error(errc::empty_window, "empty omega window");

    const double step = (omega_hi - omega_lo) / grid;
    auto f = [&](double w) { return detail::gap_indicator(p, s, w); };

    auto bisect = [&](double a, double b) {
        double fa = f(a);
        for (int it = 0; it < 80 && (b - a) > 1e-15 * std::max(std::abs(a), std::abs(b)); ++it) {
            const double m = 0.5 * (a + b);
            const double fm = f(m);
            if ((fa > 0.0) == (fm > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };

    std::vector<BandGap> gaps;
    double prev_x = omega_lo + 0.5 * step;
    bool inside = f(prev_x) > 0.0;
    double start = inside ? prev_x : 0.0;
    for (int k = 1; k < grid; ++k) {
        const double x = omega_lo + (k + 0.5) * step;
        const bool now = f(x) > 0.0;
        if (now != inside) {
            const double edge = bisect(prev_x, x);
            if (inside)
                gaps.push_back({start, edge, edge - start});
            else
                start = edge;
            inside = now;
        }
        prev_x = x;
    }
    if (inside) gaps.push_back({start, prev_x, prev_x - start});

    // merge gaps separated by less than one grid step
    std::vector<BandGap> merged;
    for (const BandGap& g : gaps) {
        if (!merged.empty() && g.omega_lo - merged.back().omega_hi < step) {
            merged.back().omega_hi = g.omega_hi;
            merged.back().width = merged.back().omega_hi - merged.back().omega_lo;
        } else {
            merged.push_back(g);
        }
    }
    return merged;
}

} // namespace jcarray
