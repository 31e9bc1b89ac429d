#include "eitats/selection.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "eitats/error.hpp"

namespace eitats {

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Eit: return "EIT";
    case Verdict::Ats: return "ATS";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

double aic_least_squares(double ssr, int n, int k)
{
    if (n <= 0) throw DomainError("aic_least_squares: n must be > 0");
    if (k < 0) throw DomainError("aic_least_squares: k must be >= 0");
    if (!(ssr > 0) || !std::isfinite(ssr))
        throw DomainError("aic_least_squares: ssr must be finite and > 0 (apply the variance floor)");
    return n * std::log(ssr / n) + 2.0 * k;
}

double floored_ssr(double ssr, int n, double max_abs_value)
{
    const double floor = 1e-30 * max_abs_value * max_abs_value;
    return std::max(ssr / n, floor) * n;
}

std::vector<double> akaike_weights(std::span<const double> aics)
{
    if (aics.empty()) throw DomainError("akaike_weights: empty input");
    for (double a : aics)
        if (!std::isfinite(a)) throw DomainError("akaike_weights: non-finite information value");

    const double best = *std::min_element(aics.begin(), aics.end());
    std::vector<double> w(aics.size());
    double total = 0.0;
    for (std::size_t i = 0; i < aics.size(); ++i) {
        w[i] = std::exp(-(aics[i] - best) / 2.0);
        total += w[i];
    }
    for (double& x : w) x /= total;
    return w;
}

std::vector<double> per_point_weights(std::span<const double> aics, int n)
{
    if (n <= 0) throw DomainError("per_point_weights: n must be > 0");
    std::vector<double> mean(aics.begin(), aics.end());
    for (double& x : mean) x /= n;
    return akaike_weights(mean);
}

double eit_threshold(double gamma_ab, double gamma_bc)
{
    if (!(gamma_bc >= 0)) throw DomainError("eit_threshold: gamma_bc must be >= 0");
    if (gamma_bc > gamma_ab)
        throw DomainError("eit_threshold: gamma_bc exceeds gamma_ab, no shared-reservoir region");
    return (gamma_ab - gamma_bc) / 2.0;
}

double noise_threshold(double gamma_ab, double gamma_bc, double sigma)
{
    if (!(sigma >= 0) || !(sigma < 0.5))
        throw DomainError("noise_threshold: sigma must lie in [0, 0.5)");
    if (!(gamma_ab > 0) || !(gamma_bc >= 0))
        throw DomainError("noise_threshold: need gamma_ab > 0 and gamma_bc >= 0");
    return std::sqrt(2.0 * sigma * gamma_ab * gamma_bc / (1.0 - 2.0 * sigma));
}

Verdict verdict_from_weights(double w_eit, double w_ats, double margin)
{
    if (std::abs(w_eit - w_ats) < margin) return Verdict::Inconclusive;
    return w_eit > w_ats ? Verdict::Eit : Verdict::Ats;
}

SelectionReport assemble_selection(std::array<std::optional<FitResult>, 2> fits,
                                   std::array<std::string, 2> fit_errors, int n_points,
                                   double max_abs_value, double margin)
{
    if (!(margin >= 0) || !(margin <= 1)) throw DomainError("margin must lie in [0, 1]");
    if (n_points <= 0) throw DomainError("assemble_selection: n_points must be > 0");
    if (!fits[0] && !fits[1]) throw DomainError("assemble_selection: no model was fitted");

    SelectionReport report;
    report.inconclusive_margin = margin;
    report.n_points = n_points;
    constexpr std::array kinds{ModelKind::Eit, ModelKind::Ats};
    for (std::size_t i = 0; i < 2; ++i) {
        if (fits[i]) {
            report.aic[i] = aic_least_squares(floored_ssr(fits[i]->ssr, n_points, max_abs_value),
                                              n_points, parameter_count(kinds[i]));
            report.per_point_aic[i] = report.aic[i] / n_points;
        } else {
            if (fit_errors[i].empty()) fit_errors[i] = "fit unavailable";
            report.aic[i] = report.per_point_aic[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    report.fits = std::move(fits);
    report.fit_errors = std::move(fit_errors);

    if (!report.fits[0] || !report.fits[1]) {
        const std::size_t ok = report.fits[0] ? 0 : 1;
        report.akaike_weights[ok] = report.per_point_weights[ok] = 1.0;
        report.akaike_weights[1 - ok] = report.per_point_weights[1 - ok] = 0.0;
        report.verdict = ok == 0 ? Verdict::Eit : Verdict::Ats;
        return report;
    }

    const auto w = akaike_weights(report.aic);
    const auto wbar = per_point_weights(report.aic, n_points);
    report.akaike_weights = {w[0], w[1]};
    report.per_point_weights = {wbar[0], wbar[1]};
    report.verdict = verdict_from_weights(wbar[0], wbar[1], margin);
    return report;
}

SelectionReport discriminate(const Spectrum& data, const FitConfig& cfg, double margin,
                             Execution exec)
{
    if (!(margin >= 0) || !(margin <= 1)) throw DomainError("discriminate: margin must lie in [0, 1]");
    data.validate();

    constexpr std::array kinds{ModelKind::Eit, ModelKind::Ats};
    std::array<std::optional<FitResult>, 2> fits;
    std::array<std::string, 2> errors;
    std::exception_ptr first_failure;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        try {
            fits[i] = fit(kinds[i], data, cfg, exec);
        } catch (const FitError& e) {
            if (!first_failure) first_failure = std::current_exception();
            errors[i] = e.what();
        }
    }
    if (!fits[0] && !fits[1]) std::rethrow_exception(first_failure);

    double max_abs = 0.0;
    for (double v : data.values) max_abs = std::max(max_abs, std::abs(v));
    return assemble_selection(std::move(fits), std::move(errors), static_cast<int>(data.size()),
                              max_abs, margin);
}

} // namespace eitats
