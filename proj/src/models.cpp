#include "eitats/models.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "eitats/error.hpp"

namespace eitats {

std::string_view to_string(ModelKind kind) { return kind == ModelKind::Eit ? "EIT" : "ATS"; }

ModelKind model_from_string(std::string_view name)
{
    if (name == "EIT" || name == "eit") return ModelKind::Eit;
    if (name == "ATS" || name == "ats") return ModelKind::Ats;
    throw DomainError("unknown model '" + std::string(name) + "'");
}

double eval_eit(const EitParams& m, double delta)
{
    const double d2 = delta * delta;
    return m.c_plus * m.c_plus / (m.g_plus * m.g_plus + d2) -
           m.c_minus * m.c_minus / (m.g_minus * m.g_minus + d2);
}

double eval_ats(const AtsParams& m, double delta)
{
    const double g2 = m.g * m.g;
    const double lo = delta - m.d0;
    const double hi = delta + m.d0;
    return m.c * m.c * (1.0 / (g2 + lo * lo) + 1.0 / (g2 + hi * hi));
}

std::array<double, 4> jacobian_eit(const EitParams& m, double delta)
{
    const double d2 = delta * delta;
    const double broad = 1.0 / (m.g_plus * m.g_plus + d2);
    const double narrow = 1.0 / (m.g_minus * m.g_minus + d2);
    return {2.0 * m.c_plus * broad,
            -2.0 * m.c_minus * narrow,
            -2.0 * m.g_plus * m.c_plus * m.c_plus * broad * broad,
            2.0 * m.g_minus * m.c_minus * m.c_minus * narrow * narrow};
}

std::array<double, 3> jacobian_ats(const AtsParams& m, double delta)
{
    const double g2 = m.g * m.g;
    const double lo = delta - m.d0;
    const double hi = delta + m.d0;
    const double l1 = 1.0 / (g2 + lo * lo);
    const double l2 = 1.0 / (g2 + hi * hi);
    const double c2 = m.c * m.c;
    return {2.0 * m.c * (l1 + l2),
            -2.0 * m.g * c2 * (l1 * l1 + l2 * l2),
            2.0 * c2 * (lo * l1 * l1 - hi * l2 * l2)};
}

ModelKind kind_of(const ModelParams& params)
{
    return std::holds_alternative<EitParams>(params) ? ModelKind::Eit : ModelKind::Ats;
}

std::vector<double> to_vector(const ModelParams& params)
{
    if (const auto* e = std::get_if<EitParams>(&params))
        return {e->c_plus, e->c_minus, e->g_plus, e->g_minus};
    const auto& a = std::get<AtsParams>(params);
    return {a.c, a.g, a.d0};
}

ModelParams from_vector(ModelKind kind, std::span<const double> v)
{
    if (v.size() != static_cast<std::size_t>(parameter_count(kind)))
        throw DomainError("from_vector: expected " + std::to_string(parameter_count(kind)) +
                          " parameters for " + std::string(to_string(kind)));
    if (kind == ModelKind::Eit) return EitParams{v[0], v[1], v[2], v[3]};
    return AtsParams{v[0], v[1], v[2]};
}

double evaluate(const ModelParams& params, double delta)
{
    return std::visit(
        [delta](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, EitParams>)
                return eval_eit(m, delta);
            else
                return eval_ats(m, delta);
        },
        params);
}

std::vector<double> jacobian(const ModelParams& params, double delta)
{
    if (const auto* e = std::get_if<EitParams>(&params)) {
        const auto g = jacobian_eit(*e, delta);
        return {g.begin(), g.end()};
    }
    const auto g = jacobian_ats(std::get<AtsParams>(params), delta);
    return {g.begin(), g.end()};
}

std::vector<double> jacobian(ModelKind kind, std::span<const double> params, double delta)
{
    return jacobian(from_vector(kind, params), delta);
}

EitParams canonicalize(const EitParams& m)
{
    return {std::abs(m.c_plus), std::abs(m.c_minus), std::abs(m.g_plus), std::abs(m.g_minus)};
}

AtsParams canonicalize(const AtsParams& m)
{
    return {std::abs(m.c), std::abs(m.g), std::abs(m.d0)};
}

ModelParams canonicalize(const ModelParams& m)
{
    return std::visit([](const auto& p) -> ModelParams { return canonicalize(p); }, m);
}

} // namespace eitats
