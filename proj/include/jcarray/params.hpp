#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "jcarray/error.hpp"

namespace jcarray {

using complexd = std::complex<double>;

// Physical rates of one atom-cavity-waveguide site, all dimensionless in
// units of the waveguide-cavity rate Gamma (kept as an explicit field, 1 by
// default, so formulas can be written out literally).
struct CqedParams {
    double g = 0.0;         // atom-cavity coupling
    double kappa = 0.0;     // cavity photon leakage rate
    double gamma = 0.0;     // atomic spontaneous emission rate
    double eta = 0.0;       // intermode backscattering strength (real by convention)
    double delta_ac = 0.0;  // atom-cavity detuning  delta = omega_c - omega_eg
    double big_gamma = 1.0; // waveguide-cavity rate, the unit of the problem

    bool lossless() const { return kappa == 0.0 && gamma == 0.0; }

    friend bool operator==(const CqedParams&, const CqedParams&) = default;
};

// Photon detuning from the atomic transition, Delta = omega - omega_eg.
struct Detuning {
    double delta = 0.0;
};

struct ScatteringAmplitudes {
    complexd t;
    complexd r;
    double T = 0.0; // |t|^2
    double R = 0.0; // |r|^2

    static ScatteringAmplitudes from_t_r(complexd t, complexd r) {
        return {t, r, std::norm(t), std::norm(r)};
    }
};

inline CqedParams validate(const CqedParams& p) {
    if (p.g < 0.0 || p.kappa < 0.0 || p.gamma < 0.0 || p.eta < 0.0)
        throw Error(errc::negative_rate, "rates g, kappa, gamma, eta must be non-negative");
    if (!(p.big_gamma > 0.0))
        throw Error(errc::non_positive_unit, "big_gamma must be strictly positive");
    if (!std::isfinite(p.g) || !std::isfinite(p.kappa) || !std::isfinite(p.gamma) ||
        !std::isfinite(p.eta) || !std::isfinite(p.delta_ac) || !std::isfinite(p.big_gamma))
        throw Error(errc::invalid_value, "parameters must be finite");
    return p;
}

// (tilde Delta_c, tilde Delta_eg) = (Delta - delta + i kappa, Delta + i gamma)
inline std::pair<complexd, complexd> effective_detunings(const CqedParams& p, Detuning d) {
    return {complexd(d.delta - p.delta_ac, p.kappa), complexd(d.delta, p.gamma)};
}

// C = g^2 / (2 kappa gamma)
inline double cooperativity(const CqedParams& p) {
    if (p.kappa == 0.0 || p.gamma == 0.0)
        throw Error(errc::division_by_zero_rate, "cooperativity requires kappa > 0 and gamma > 0");
    return p.g * p.g / (2.0 * p.kappa * p.gamma);
}

} // namespace jcarray
