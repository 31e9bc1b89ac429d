#pragma once

#include <cstdint>
#include <vector>

#include "eitats/execution.hpp"
#include "eitats/models.hpp"
#include "eitats/spectrum.hpp"

namespace eitats {

struct FitConfig {
    int max_iterations = 10000;
    double relative_tolerance = 1e-12; ///< on the relative SSR change of an accepted step
    double initial_damping = 1e-3;
    int n_starts = 16;
    std::uint64_t seed = 0;

    void validate() const;
};

struct FitResult {
    ModelParams params;           ///< canonicalized
    double ssr = 0.0;             ///< sum of squared unweighted residuals
    double sigma_hat_sq = 0.0;    ///< ssr / n_points
    int n_points = 0;
    bool converged = false;       ///< whether the winning start met a convergence test
    int n_starts_agreeing = 0;    ///< starts within 1e-6 relative of the best SSR
    int best_start = -1;
    int iterations = 0;           ///< LM iterations of the winning start

    ModelKind kind() const { return kind_of(params); }
};

/// Outcome of one damped least-squares run from a single starting point.
struct LmRun {
    std::vector<double> params;
    double ssr = 0.0;
    bool converged = false;
    int iterations = 0;
    /// SSR after every accepted step, starting with the initial SSR.
    std::vector<double> ssr_history;
};

/// Levenberg-Marquardt with Marquardt diagonal scaling. The damping is divided
/// by 10 after an accepted step and multiplied by 10 after a rejected one.
LmRun levenberg_marquardt(ModelKind kind, const Spectrum& data, std::vector<double> start,
                          const FitConfig& cfg);

/// Data-driven first guess followed by n-1 seeded log-uniform perturbations
/// (factors 1/4 to 4) of it.
std::vector<std::vector<double>> initial_guesses(ModelKind kind, const Spectrum& data, int n,
                                                 std::uint64_t seed);

/// Multi-start least-squares fit. The result is the lowest-SSR start (lowest
/// start index on ties) and is identical for both execution policies. Throws
/// FitError when no start converges or the data are flat.
FitResult fit(ModelKind kind, const Spectrum& data, const FitConfig& cfg = {},
              Execution exec = Execution::Parallel);

} // namespace eitats
