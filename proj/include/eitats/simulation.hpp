#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eitats/execution.hpp"
#include "eitats/fitter.hpp"
#include "eitats/selection.hpp"
#include "eitats/spectrum.hpp"

namespace eitats {

/// Multiplicative Gaussian noise <A> = (1 + xi) A with xi ~ N(0, sigma^2),
/// drawn independently per point from the stream (seed, replicate, point).
struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
    int n_replicates = 1;

    void validate() const;
};

Spectrum add_noise(const Spectrum& data, const NoiseSpec& spec, int replicate);

/// Settings shared by the sweeps: detuning grid, fitter and verdict margin.
struct SweepOptions {
    std::vector<double> grid = default_grid();
    FitConfig fit{};
    double margin = 0.1;
};

struct SweepResult {
    std::vector<double> axis;
    /// Replicate-averaged (EIT, ATS) weights per axis point.
    std::vector<std::array<double, 2>> per_point_weights;
    std::vector<std::array<double, 2>> akaike_weights;
    /// Replicates in which at least one model failed to fit.
    std::vector<int> fit_failures;
    /// Linear interpolation of the first sign change of w_EIT - w_ATS.
    std::optional<double> crossover;
    std::optional<double> akaike_crossover;
};

/// Resonant-drive sweep over the pump Rabi frequency. Every (omega, replicate)
/// cell is independent; the parallel and serial paths give identical output.
SweepResult sweep_omega(double gamma_ab, double gamma_bc, const NoiseSpec& noise,
                        std::span<const double> omegas, const SweepOptions& opts = {},
                        Execution exec = Execution::Parallel);

struct BoundaryResult {
    std::vector<double> gamma_bc;
    /// Per-point-weight crossover for each gamma_bc (empty when none found).
    std::vector<std::optional<double>> omega_aic;
    /// Transparency depth of the profile at the crossover pump strength.
    std::vector<std::optional<double>> depth_at_crossover;
    std::vector<SweepResult> sweeps;
};

/// Transition boundary Omega_AIC as a function of gamma_bc.
BoundaryResult sweep_gbc_boundary(double gamma_ab, std::span<const double> gbc_values,
                                  const NoiseSpec& noise, std::span<const double> omegas,
                                  const SweepOptions& opts = {},
                                  Execution exec = Execution::Parallel);

/// First + to - sign change of (first - second), linearly interpolated.
std::optional<double> find_crossover(std::span<const double> axis,
                                     std::span<const std::array<double, 2>> weights);

} // namespace eitats
