#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "eitats/fitter.hpp"
#include "eitats/lineshape.hpp"
#include "eitats/selection.hpp"
#include "eitats/simulation.hpp"
#include "eitats/spectrum.hpp"

namespace eitats {

/// Reads a `delta,value[,sigma]` table. Comma, tab or semicolon delimiters are
/// accepted (detected from the header); blank lines and `#` comments are
/// skipped. Rows are sorted by delta; duplicates are rejected.
Spectrum parse_spectrum(std::istream& in);
Spectrum ingest_spectrum(const std::filesystem::path& path);

/// CSV text with 17 significant digits, LF line endings.
std::string format_spectrum(const Spectrum& s);

/// Equivalent to printf("%.17g"): lossless for doubles.
std::string format_number(double x);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& content);

nlohmann::json to_json(const TlaParams& p);
nlohmann::json to_json(const CircuitParams& c);
nlohmann::json to_json(const FitConfig& cfg);
nlohmann::json to_json(const NoiseSpec& n);
nlohmann::json to_json(const ModelParams& params);
nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const SelectionReport& r);
nlohmann::json to_json(const SweepResult& r);
nlohmann::json to_json(const BoundaryResult& r);

std::string format_sweep_table(const SweepResult& r);
std::string format_boundary_table(const BoundaryResult& r);

} // namespace eitats
