#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eitats/fitter.hpp"
#include "eitats/lineshape.hpp"
#include "eitats/simulation.hpp"

namespace eitats::app {

enum class Command { Generate, Fit, Discriminate, Sweep, Boundary, Circuit };

std::string to_string(Command c);

/// lo:hi:step range as given on the command line.
struct Range {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    std::vector<double> values() const { return make_grid(lo, hi, step); }
};

Range parse_range(const std::string& text);

/// Fully resolved invocation. Every report echoes it, and running the echoed
/// configuration again reproduces the report byte for byte.
struct RunConfig {
    Command command = Command::Discriminate;
    std::optional<std::filesystem::path> input;
    std::optional<std::filesystem::path> output;
    std::optional<std::filesystem::path> report;
    std::string model = "both"; ///< fit: eit, ats or both

    TlaParams tla{};
    CircuitParams circuit{};
    NoiseSpec noise{};
    FitConfig fit{};
    double margin = 0.1;

    Range grid{-5.0, 5.0, 0.05};
    Range omegas{0.05, 1.5, 0.01};
    Range gbc_values{0.02, 0.3, 0.02};

    void validate() const;
};

/// Circuit preset: rates in MHz/2pi, |delta| <= 30 MHz in 0.25 MHz steps.
RunConfig circuit_preset();

nlohmann::json to_json(const RunConfig& cfg);

/// Result of command-line parsing. `config` is empty when the process should
/// exit right away (help, version, usage error); `message` then holds the text
/// to print and `exit_code` the status.
struct Parsed {
    std::optional<RunConfig> config;
    int exit_code = 0;
    std::string message;
};

Parsed parse_command_line(int argc, const char* const* argv);

struct Outcome {
    nlohmann::json report;
    int exit_code = 0;
};

/// Executes the command, writes any requested files and returns the report.
/// Library errors are captured into the report's "error" field with a
/// nonzero exit code.
Outcome run(const RunConfig& cfg);

} // namespace eitats::app
