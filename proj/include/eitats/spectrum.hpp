#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eitats {

/// A sampled profile over a two-photon detuning grid.
///
/// `values` hold either an absorption A(delta_j) or the absorption-like
/// quantity 1 - Re t(delta_j) of a transmission measurement. Per-point
/// uncertainties are optional; when present `sigma_exp` holds their RMS.
struct Spectrum {
    std::vector<double> deltas;
    std::vector<double> values;
    std::vector<double> uncertainties;
    std::optional<double> sigma_exp;
    std::map<std::string, std::string> meta;

    std::size_t size() const noexcept { return deltas.size(); }

    /// Throws GridError unless deltas are finite and strictly increasing and
    /// every column has matching length.
    void validate() const;
};

/// Evenly spaced grid lo, lo+step, ..., hi (inclusive, rounded to the nearest
/// whole number of steps).
std::vector<double> make_grid(double lo, double hi, double step);

/// |delta| <= 5 in steps of 0.05: 201 points.
std::vector<double> default_grid();

/// Throws GridError unless the grid is finite and strictly increasing.
void require_increasing(std::span<const double> grid, const char* what = "grid");

} // namespace eitats
