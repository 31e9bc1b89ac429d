#include "eitats/simulation.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "eitats/error.hpp"
#include "eitats/lineshape.hpp"
#include "eitats/random.hpp"

namespace eitats {

void NoiseSpec::validate() const
{
    if (!(sigma >= 0) || !(sigma < 0.5)) throw DomainError("NoiseSpec: sigma must lie in [0, 0.5)");
    if (n_replicates < 1) throw DomainError("NoiseSpec: n_replicates must be >= 1");
}

Spectrum add_noise(const Spectrum& data, const NoiseSpec& spec, int replicate)
{
    spec.validate();
    if (replicate < 0 || replicate >= spec.n_replicates)
        throw DomainError("add_noise: replicate " + std::to_string(replicate) + " outside [0, " +
                          std::to_string(spec.n_replicates) + ")");
    Spectrum out = data;
    out.sigma_exp = spec.sigma;
    if (spec.sigma == 0.0) return out;

    const CounterRng rng(spec.seed, static_cast<std::uint64_t>(replicate));
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] *= 1.0 + spec.sigma * rng.normal(j);
    return out;
}

std::optional<double> find_crossover(std::span<const double> axis,
                                     std::span<const std::array<double, 2>> weights)
{
    for (std::size_t i = 1; i < axis.size() && i < weights.size(); ++i) {
        const double before = weights[i - 1][0] - weights[i - 1][1];
        const double after = weights[i][0] - weights[i][1];
        if (before >= 0 && after < 0) {
            if (before == 0) return axis[i - 1];
            const double t = before / (before - after);
            return axis[i - 1] + t * (axis[i] - axis[i - 1]);
        }
    }
    return std::nullopt;
}

namespace {

struct Cell {
    SelectionReport report;
    bool failed = false;
};

} // namespace

SweepResult sweep_omega(double gamma_ab, double gamma_bc, const NoiseSpec& noise,
                        std::span<const double> omegas, const SweepOptions& opts, Execution exec)
{
    noise.validate();
    opts.fit.validate();
    require_increasing(omegas, "sweep omegas");
    TlaParams base;
    base.gamma_ab = gamma_ab;
    base.gamma_bc = gamma_bc;
    base.validate();

    // Without noise every replicate is the same spectrum.
    const int replicates = noise.sigma > 0 ? noise.n_replicates : 1;
    const std::size_t n_axis = omegas.size();
    const std::size_t n_cells = n_axis * static_cast<std::size_t>(replicates);
    std::vector<Cell> cells(n_cells);

    const auto solve = [&](std::size_t c) {
        const std::size_t i = c / static_cast<std::size_t>(replicates);
        const int r = static_cast<int>(c % static_cast<std::size_t>(replicates));
        TlaParams p = base;
        p.omega = omegas[i];
        try {
            const Spectrum clean = absorption_profile(p, opts.grid);
            const Spectrum noisy = add_noise(clean, noise, r);
            // Parallelism lives at the cell level; each fit runs its starts serially.
            cells[c].report = discriminate(noisy, opts.fit, opts.margin, Execution::Serial);
            cells[c].failed = cells[c].report.fit_failed();
        } catch (const Error&) {
            cells[c].failed = true;
            cells[c].report.per_point_weights = {0.5, 0.5};
            cells[c].report.akaike_weights = {0.5, 0.5};
        }
    };

    const auto total = static_cast<std::ptrdiff_t>(n_cells);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t c = 0; c < total; ++c) solve(static_cast<std::size_t>(c));
    } else {
        for (std::ptrdiff_t c = 0; c < total; ++c) solve(static_cast<std::size_t>(c));
    }

    SweepResult out;
    out.axis.assign(omegas.begin(), omegas.end());
    out.per_point_weights.resize(n_axis);
    out.akaike_weights.resize(n_axis);
    out.fit_failures.assign(n_axis, 0);
    for (std::size_t i = 0; i < n_axis; ++i) {
        std::array<double, 2> wbar{}, w{};
        for (int r = 0; r < replicates; ++r) {
            const auto& cell = cells[i * static_cast<std::size_t>(replicates) + static_cast<std::size_t>(r)];
            for (std::size_t m = 0; m < 2; ++m) {
                wbar[m] += cell.report.per_point_weights[m];
                w[m] += cell.report.akaike_weights[m];
            }
            out.fit_failures[i] += cell.failed ? 1 : 0;
        }
        for (std::size_t m = 0; m < 2; ++m) {
            wbar[m] /= replicates;
            w[m] /= replicates;
        }
        out.per_point_weights[i] = wbar;
        out.akaike_weights[i] = w;
    }
    out.crossover = find_crossover(out.axis, out.per_point_weights);
    out.akaike_crossover = find_crossover(out.axis, out.akaike_weights);
    return out;
}

BoundaryResult sweep_gbc_boundary(double gamma_ab, std::span<const double> gbc_values,
                                  const NoiseSpec& noise, std::span<const double> omegas,
                                  const SweepOptions& opts, Execution exec)
{
    require_increasing(gbc_values, "gamma_bc values");
    for (double g : gbc_values)
        if (!(g >= 0) || !(g < gamma_ab))
            throw DomainError("sweep_gbc_boundary: each gamma_bc must lie in [0, gamma_ab)");

    BoundaryResult out;
    out.gamma_bc.assign(gbc_values.begin(), gbc_values.end());
    for (double gbc : gbc_values) {
        auto sweep = sweep_omega(gamma_ab, gbc, noise, omegas, opts, exec);
        out.omega_aic.push_back(sweep.crossover);
        std::optional<double> depth;
        if (sweep.crossover && gbc > 0) {
            TlaParams p;
            p.gamma_ab = gamma_ab;
            p.gamma_bc = gbc;
            p.omega = *sweep.crossover;
            depth = transparency_depth(p);
        }
        out.depth_at_crossover.push_back(depth);
        out.sweeps.push_back(std::move(sweep));
    }
    return out;
}

} // namespace eitats
