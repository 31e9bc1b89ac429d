#include "eitats/spectrum.hpp"

#include <cmath>
#include <string>

#include "eitats/error.hpp"

namespace eitats {

void require_increasing(std::span<const double> grid, const char* what)
{
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (!std::isfinite(grid[j]))
            throw GridError(std::string(what) + ": non-finite entry at index " + std::to_string(j));
        if (j > 0 && !(grid[j] > grid[j - 1]))
            throw GridError(std::string(what) + ": not strictly increasing at index " +
                            std::to_string(j));
    }
}

void Spectrum::validate() const
{
    require_increasing(deltas, "spectrum deltas");
    if (values.size() != deltas.size())
        throw GridError("spectrum: values and deltas differ in length");
    if (!uncertainties.empty() && uncertainties.size() != deltas.size())
        throw GridError("spectrum: uncertainties and deltas differ in length");
    for (std::size_t j = 0; j < values.size(); ++j)
        if (!std::isfinite(values[j]))
            throw GridError("spectrum: non-finite value at index " + std::to_string(j));
}

std::vector<double> make_grid(double lo, double hi, double step)
{
    if (!(step > 0) || !std::isfinite(lo) || !std::isfinite(hi) || !(hi >= lo))
        throw GridError("grid: need finite lo <= hi and step > 0");
    const auto steps = static_cast<std::size_t>(std::llround((hi - lo) / step));
    std::vector<double> grid(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        grid[i] = lo + static_cast<double>(i) * step;
    return grid;
}

std::vector<double> default_grid() { return make_grid(-5.0, 5.0, 0.05); }

} // namespace eitats
