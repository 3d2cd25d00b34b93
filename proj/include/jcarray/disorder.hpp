#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "jcarray/error.hpp"
#include "jcarray/parallel.hpp"
#include "jcarray/params.hpp"
#include "jcarray/rng.hpp"
#include "jcarray/site_scattering.hpp"
#include "jcarray/transfer.hpp"

namespace jcarray {

struct DisorderSpec {
    double sigma_over_l = 0.25;   // Gaussian width relative to the lattice constant
    int realizations = 100;
    std::uint64_t seed = 0;
    bool clamp = true;            // reject-and-resample draws that break ordering

    bool weak() const { return sigma_over_l <= 0.25; }

    friend bool operator==(const DisorderSpec&, const DisorderSpec&) = default;
};

inline DisorderSpec validate(const DisorderSpec& d) {
    if (!(d.sigma_over_l > 0.0) || d.sigma_over_l > 0.5)
        throw Error(errc::invalid_value, "sigma_over_l must be in (0, 0.5]");
    if (d.realizations < 1) throw Error(errc::invalid_value, "realizations must be >= 1");
    return d;
}

// Per-grid-point ensemble statistics. Flagged (singular) realizations are
// excluded per point; m_effective counts the survivors.
struct DisorderStats {
    double delta = 0.0;
    double mean_T = 0.0;
    double stderr_T = 0.0;
    double mean_R = 0.0;
    double stderr_R = 0.0;
    int m_effective = 0;
};

// Cavity positions (lambda0 units) for one realization: x_j drawn from
// Normal(j L, sigma) on a counter-based stream keyed by (seed, index, site,
// attempt). With clamp set, draws that break strict ordering are rejected
// and resampled, preserving the per-site marginals.
inline std::vector<double> sample_positions(const LatticeSpec& spec, const DisorderSpec& dspec,
                                            int realization_index) {
    validate(spec);
    validate(dspec);
    const double L = spec.l_over_lambda0;
    const double sigma = dspec.sigma_over_l * L;
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(spec.n_sites));
    double prev = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= spec.n_sites; ++j) {
        std::uint64_t attempt = 0;
        double x;
        for (;;) {
            x = j * L + sigma * rng::standard_normal(dspec.seed,
                                                     static_cast<std::uint64_t>(realization_index),
                                                     static_cast<std::uint64_t>(j), attempt);
            if (!dspec.clamp || x > prev) break;
            if (++attempt >= 1000)
                throw Error(errc::ordering_unsatisfiable,
                            "could not draw ordered positions after 1000 attempts");
        }
        xs.push_back(x);
        prev = x;
    }
    return xs;
}

namespace detail {
// Chain total for one realization at one detuning. Blocks are site+fiber
// with the fiber phase taken from the realized spacing *before* each site;
// regrouped this way the product equals the site-then-spacing chain with a
// zero phase after the last site.
inline SpectrumPoint realization_point(const CqedParams& p, const LatticeSpec& s,
                                       const std::vector<double>& positions, Detuning d) {
    const ScatteringAmplitudes amps = sweep_site_amps(p, d);
    if (std::abs(amps.t) <= 1e-14) return {d.delta, 0.0, std::min(amps.R, 1.0), true};

    TransferMatrix total = block_matrix(amps, 0.0); // site nearest the input
    const auto n = positions.size();
    for (std::size_t j = 1; j < n; ++j) {
        const double spacing = positions[j] - positions[j - 1];
        total = block_matrix(amps, phase_for_spacing(s, spacing, d)) * total;
    }
    return extract_unit_det(total, d.delta);
}
} // namespace detail

// Spectrum of one disorder realization with explicit cavity positions.
inline std::vector<SpectrumPoint> realization_spectrum(const CqedParams& p, const LatticeSpec& s,
                                                       const std::vector<double>& positions,
                                                       double delta_lo, double delta_hi,
                                                       int n_points) {
    if (n_points < 2) throw Error(errc::invalid_value, "n_points must be >= 2");
    if (positions.empty()) throw Error(errc::invalid_value, "positions must be non-empty");
    for (std::size_t j = 1; j < positions.size(); ++j)
        if (!(positions[j] > positions[j - 1]))
            throw Error(errc::invalid_value, "positions must be strictly increasing");

    std::vector<SpectrumPoint> out;
    out.reserve(static_cast<std::size_t>(n_points));
    const double h = (delta_hi - delta_lo) / (n_points - 1);
    for (int k = 0; k < n_points; ++k)
        out.push_back(detail::realization_point(p, s, positions, Detuning{delta_lo + k * h}));
    return out;
}

// Mean and standard error of (T, R) over `realizations` seeded draws.
// Accumulation runs in fixed realization order per grid point, so any thread
// partition of the grid yields bit-identical statistics.
inline std::vector<DisorderStats> ensemble_average(const CqedParams& p, const LatticeSpec& s,
                                                   const DisorderSpec& dspec, double delta_lo,
                                                   double delta_hi, int n_points,
                                                   unsigned threads = 1) {
    if (n_points < 2) throw Error(errc::invalid_value, "n_points must be >= 2");
    if (dspec.realizations < 2) throw Error(errc::invalid_value, "ensemble needs realizations >= 2");
    validate(s);
    validate(dspec);

    const int m = dspec.realizations;
    std::vector<std::vector<double>> positions(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) positions[static_cast<std::size_t>(i)] = sample_positions(s, dspec, i);

    const double h = (delta_hi - delta_lo) / (n_points - 1);
    std::vector<DisorderStats> out(static_cast<std::size_t>(n_points));

    parallel_for_index(static_cast<std::size_t>(n_points), threads, [&](std::size_t k) {
        const Detuning d{delta_lo + static_cast<double>(k) * h};
        std::vector<double> ts, rs;
        ts.reserve(static_cast<std::size_t>(m));
        rs.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            const SpectrumPoint pt =
                detail::realization_point(p, s, positions[static_cast<std::size_t>(i)], d);
            if (pt.flag) continue;
            ts.push_back(pt.T);
            rs.push_back(pt.R);
        }
        DisorderStats st;
        st.delta = d.delta;
        st.m_effective = static_cast<int>(ts.size());
        if (!ts.empty()) {
            double sum_t = 0.0, sum_r = 0.0;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                sum_t += ts[i];
                sum_r += rs[i];
            }
            st.mean_T = sum_t / static_cast<double>(ts.size());
            st.mean_R = sum_r / static_cast<double>(rs.size());
        }
        if (ts.size() >= 2) {
            double ss_t = 0.0, ss_r = 0.0;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                ss_t += (ts[i] - st.mean_T) * (ts[i] - st.mean_T);
                ss_r += (rs[i] - st.mean_R) * (rs[i] - st.mean_R);
            }
            const auto nn = static_cast<double>(ts.size());
            st.stderr_T = std::sqrt(ss_t / (nn - 1.0)) / std::sqrt(nn);
            st.stderr_R = std::sqrt(ss_r / (nn - 1.0)) / std::sqrt(nn);
        }
        out[k] = st;
    });
    return out;
}

} // namespace jcarray
