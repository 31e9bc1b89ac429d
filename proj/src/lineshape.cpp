#include "eitats/lineshape.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "eitats/error.hpp"

namespace eitats {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

bool finite(double x) { return std::isfinite(x); }

} // namespace

void TlaParams::validate() const
{
    if (!finite(alpha) || !finite(omega) || !finite(delta1) || !finite(gamma_ab) ||
        !finite(gamma_bc))
        throw DomainError("TlaParams: non-finite field");
    if (!(alpha > 0)) throw DomainError("TlaParams: alpha must be > 0");
    if (!(omega >= 0)) throw DomainError("TlaParams: omega must be >= 0");
    if (!(gamma_ab > 0)) throw DomainError("TlaParams: gamma_ab must be > 0");
    if (!(gamma_bc >= 0)) throw DomainError("TlaParams: gamma_bc must be >= 0");
}

void CircuitParams::validate() const
{
    if (!finite(gamma_rel) || !finite(gamma_ab) || !finite(gamma_bc) || !finite(omega))
        throw DomainError("CircuitParams: non-finite field");
    if (!(gamma_rel > 0)) throw DomainError("CircuitParams: gamma_rel must be > 0");
    if (!(gamma_ab > 0)) throw DomainError("CircuitParams: gamma_ab must be > 0");
    if (!(gamma_bc >= 0)) throw DomainError("CircuitParams: gamma_bc must be >= 0");
    if (!(omega >= 0)) throw DomainError("CircuitParams: omega must be >= 0");
}

std::complex<double> susceptibility(const TlaParams& p, double delta)
{
    p.validate();
    if (!finite(delta)) throw DomainError("susceptibility: non-finite detuning");

    const cplx two_photon{delta, -p.gamma_bc};
    cplx denom{delta + p.delta1, -p.gamma_ab};
    if (p.omega > 0) {
        if (two_photon == cplx{})
            throw SingularEvaluationError("susceptibility: delta = 0 with gamma_bc = 0 and omega > 0");
        denom -= p.omega * p.omega / two_photon;
    }
    if (!(std::abs(denom) > 0) || !finite(denom.real()) || !finite(denom.imag()))
        throw SingularEvaluationError("susceptibility: vanishing denominator at delta = " + fmt(delta));
    return p.alpha / denom;
}

PoleDecomposition pole_decomposition(const TlaParams& p)
{
    p.validate();
    const cplx shift{p.delta1, p.gamma_bc - p.gamma_ab};
    cplx radicand = p.omega * p.omega + shift * shift / 4.0;
    // A negative zero imaginary part would flip the principal root onto the
    // lower branch and swap the pole labels.
    radicand = {radicand.real(), radicand.imag() + 0.0};
    const cplx root = std::sqrt(radicand);
    const cplx centre = -p.delta1 / 2.0 + I * (p.gamma_ab + p.gamma_bc) / 2.0;

    PoleDecomposition d;
    d.delta_plus = centre + root;
    d.delta_minus = centre - root;
    const cplx split = d.delta_plus - d.delta_minus;
    if (std::abs(split) < 1e-10 * (p.gamma_ab + p.gamma_bc))
        throw DegeneratePoleError("pole_decomposition: coincident poles at omega = " + fmt(p.omega));
    d.s_plus = (d.delta_plus - I * p.gamma_bc) / split;
    d.s_minus = -(d.delta_minus - I * p.gamma_bc) / split;
    return d;
}

Spectrum absorption_profile(const TlaParams& p, std::span<const double> grid)
{
    p.validate();
    require_increasing(grid);
    Spectrum s;
    s.deltas.assign(grid.begin(), grid.end());
    s.values.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        try {
            s.values[j] = susceptibility(p, grid[j]).imag();
        } catch (const SingularEvaluationError& e) {
            throw SingularEvaluationError(std::string(e.what()) + " (grid index " +
                                              std::to_string(j) + ")",
                                          j);
        }
    }
    s.meta["source"] = "absorption";
    s.meta["alpha"] = fmt(p.alpha);
    s.meta["omega"] = fmt(p.omega);
    s.meta["delta1"] = fmt(p.delta1);
    s.meta["gamma_ab"] = fmt(p.gamma_ab);
    s.meta["gamma_bc"] = fmt(p.gamma_bc);
    return s;
}

std::complex<double> transmission(const CircuitParams& c, double delta)
{
    c.validate();
    const cplx lower{c.gamma_bc, delta};
    cplx denom{c.gamma_ab, delta};
    if (c.omega > 0) {
        if (lower == cplx{}) return 1.0; // pump term diverges, probe fully transmitted
        denom += c.omega * c.omega / lower;
    }
    return 1.0 - (c.gamma_rel / 2.0) / denom;
}

Spectrum transmission_profile(const CircuitParams& c, std::span<const double> grid)
{
    c.validate();
    require_increasing(grid);
    Spectrum s;
    s.deltas.assign(grid.begin(), grid.end());
    s.values.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        s.values[j] = 1.0 - transmission(c, grid[j]).real();
    s.meta["source"] = "transmission";
    s.meta["gamma_rel"] = fmt(c.gamma_rel);
    s.meta["gamma_ab"] = fmt(c.gamma_ab);
    s.meta["gamma_bc"] = fmt(c.gamma_bc);
    s.meta["omega"] = fmt(c.omega);
    return s;
}

double transparency_depth(const TlaParams& p)
{
    p.validate();
    if (p.delta1 != 0.0) throw DomainError("transparency_depth: requires resonant pump (delta1 = 0)");
    if (!(p.gamma_bc > 0)) throw DomainError("transparency_depth: requires gamma_bc > 0");
    const double pump = p.omega * p.omega;
    return pump / (p.gamma_ab * p.gamma_bc + pump);
}

} // namespace eitats
