#pragma once

#include <array>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace eitats {

/// Signed Lorentzian pair centred at the origin: a broad positive line minus a
/// narrow negative one,
///   A_EIT = C+^2 / (g+^2 + d^2) - C-^2 / (g-^2 + d^2).
struct EitParams {
    double c_plus = 0.0;
    double c_minus = 0.0;
    double g_plus = 1.0;
    double g_minus = 1.0;
};

/// Two equal-width Lorentzians at +/- d0,
///   A_ATS = C^2 [1/(g^2 + (d - d0)^2) + 1/(g^2 + (d + d0)^2)].
struct AtsParams {
    double c = 0.0;
    double g = 1.0;
    double d0 = 0.0;
};

enum class ModelKind { Eit, Ats };

using ModelParams = std::variant<EitParams, AtsParams>;

constexpr int parameter_count(ModelKind kind) { return kind == ModelKind::Eit ? 4 : 3; }

std::string_view to_string(ModelKind kind);
ModelKind model_from_string(std::string_view name);

double eval_eit(const EitParams& m, double delta);
double eval_ats(const AtsParams& m, double delta);

/// Analytic gradients with respect to (C+, C-, g+, g-) and (C, g, d0).
std::array<double, 4> jacobian_eit(const EitParams& m, double delta);
std::array<double, 3> jacobian_ats(const AtsParams& m, double delta);

/// Flat-vector forms in the parameter order above.
std::vector<double> to_vector(const ModelParams& params);
ModelParams from_vector(ModelKind kind, std::span<const double> v);
ModelKind kind_of(const ModelParams& params);

double evaluate(const ModelParams& params, double delta);
std::vector<double> jacobian(const ModelParams& params, double delta);
std::vector<double> jacobian(ModelKind kind, std::span<const double> params, double delta);

/// Reflection-symmetry canonical form: amplitudes, widths and d0 taken as
/// absolute values. Model values are unchanged.
EitParams canonicalize(const EitParams& m);
AtsParams canonicalize(const AtsParams& m);
ModelParams canonicalize(const ModelParams& m);

} // namespace eitats
