#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eitats/execution.hpp"
#include "eitats/fitter.hpp"

namespace eitats {

enum class Verdict { Eit, Ats, Inconclusive };

std::string_view to_string(Verdict v);

/// Least-squares Akaike information N ln(ssr / N) + 2K (natural log).
/// Requires ssr > 0; floor exact fits with `floored_ssr` first.
double aic_least_squares(double ssr, int n, int k);

/// Applies the variance floor max(ssr/N, 1e-30 max|values|^2) and returns the
/// corresponding SSR.
double floored_ssr(double ssr, int n, double max_abs_value);

/// Softmax of -I/2, evaluated after shifting by the minimum I.
std::vector<double> akaike_weights(std::span<const double> aics);

/// Akaike weights of the per-point information I/n.
std::vector<double> per_point_weights(std::span<const double> aics, int n);

/// Upper edge of the shared-reservoir region, (G_ab - G_bc) / 2.
double eit_threshold(double gamma_ab, double gamma_bc);

/// Pump strength below which the induced transparency is smaller than 2 sigma:
/// sqrt(2 sigma G_ab G_bc / (1 - 2 sigma)).
double noise_threshold(double gamma_ab, double gamma_bc, double sigma);

/// Inconclusive when |w_eit - w_ats| < margin, otherwise the heavier model.
Verdict verdict_from_weights(double w_eit, double w_ats, double margin);

/// Index 0 is always the EIT model and index 1 the ATS model.
struct SelectionReport {
    std::array<double, 2> aic{};
    std::array<double, 2> akaike_weights{};
    std::array<double, 2> per_point_aic{};
    std::array<double, 2> per_point_weights{};
    Verdict verdict = Verdict::Inconclusive;
    double inconclusive_margin = 0.1;
    int n_points = 0;

    std::array<std::optional<FitResult>, 2> fits;
    /// Empty when the model fitted; otherwise the fitter's error message.
    std::array<std::string, 2> fit_errors;

    bool fit_failed() const { return !fit_errors[0].empty() || !fit_errors[1].empty(); }
};

/// Builds the report from already-computed fits (index 0 EIT, 1 ATS). A
/// missing fit must come with its error message; at least one fit is required.
SelectionReport assemble_selection(std::array<std::optional<FitResult>, 2> fits,
                                   std::array<std::string, 2> fit_errors, int n_points,
                                   double max_abs_value, double margin);

/// Fits both models and applies the information criterion. If exactly one
/// fit fails, the surviving model wins with weight 1 and the failure is
/// recorded in fit_errors; if both fail the first error propagates.
SelectionReport discriminate(const Spectrum& data, const FitConfig& cfg = {}, double margin = 0.1,
                             Execution exec = Execution::Parallel);

} // namespace eitats
