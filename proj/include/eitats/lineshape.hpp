#pragma once

#include <complex>
#include <span>

#include "eitats/spectrum.hpp"

namespace eitats {

/// Lambda three-level atom driven by a probe (alpha) on |a>-|b> and a pump
/// (omega) on |a>-|c>. All rates share one unit system.
struct TlaParams {
    double alpha = 1.0;    ///< probe Rabi frequency
    double omega = 0.0;    ///< pump Rabi frequency
    double delta1 = 0.0;   ///< one-photon detuning
    double gamma_ab = 1.0; ///< dephasing of the probed transition
    double gamma_bc = 0.1; ///< ground-state coherence dephasing

    void validate() const;
};

/// Flux-qubit transmission line: gamma_rel is the population relaxation rate
/// entering the transmission coefficient numerator.
struct CircuitParams {
    double gamma_rel = 11.0;
    double gamma_ab = 7.2;
    double gamma_bc = 0.96 * 7.2;
    double omega = 6.0;

    void validate() const;
};

/// Decaying dressed states: poles of the linear response and their residues.
struct PoleDecomposition {
    std::complex<double> delta_plus;
    std::complex<double> delta_minus;
    std::complex<double> s_plus;
    std::complex<double> s_minus;

    /// sigma_ab(delta) / alpha rebuilt from the two resonant contributions.
    std::complex<double> resum(double delta) const
    {
        return s_plus / (delta - delta_plus) + s_minus / (delta - delta_minus);
    }
};

/// Steady-state probe coherence
///   sigma_ab = alpha / [delta + Delta - i G_ab - Omega^2 / (delta - i G_bc)].
/// Its imaginary part is the absorption A(delta).
std::complex<double> susceptibility(const TlaParams& p, double delta);

/// Spectral poles delta_pm and strengths S_pm. The square root takes the
/// principal branch, so delta_plus - delta_minus = +2 sqrt(...). Throws
/// DegeneratePoleError within 1e-10 (G_ab + G_bc) of the exceptional point.
PoleDecomposition pole_decomposition(const TlaParams& p);

/// values[j] = Im susceptibility(p, grid[j]).
Spectrum absorption_profile(const TlaParams& p, std::span<const double> grid);

/// Transmission coefficient t = 1 - (g/2) / [G_ab + i delta + Omega^2/(G_bc + i delta)].
std::complex<double> transmission(const CircuitParams& c, double delta);

/// Absorption-like profile values[j] = 1 - Re t(grid[j]).
Spectrum transmission_profile(const CircuitParams& c, std::span<const double> grid);

/// Fractional on-resonance transparency 1 - A(0; Omega) / A(0; 0)
/// = Omega^2 / (G_ab G_bc + Omega^2). Resonant pump only.
double transparency_depth(const TlaParams& p);

} // namespace eitats
