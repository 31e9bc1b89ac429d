#include "eitats/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>
#include <vector>

#include "eitats/error.hpp"

namespace eitats {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(delim, pos);
        out.push_back(trim(line.substr(pos, next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

double parse_number(std::string_view field, std::size_t line, const char* column)
{
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(x))
        throw ParseError(std::string("invalid ") + column + " '" + std::string(field) + "'", line);
    return x;
}

struct Row {
    double delta;
    double value;
    double sigma;
    std::size_t line;
};

json optional_number(const std::optional<double>& x)
{
    return x ? json(*x) : json(nullptr);
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

} // namespace

Spectrum parse_spectrum(std::istream& in)
{
    std::string raw;
    std::size_t line_no = 0;
    char delim = 0;
    bool with_sigma = false;
    std::vector<Row> rows;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        if (!delim) {
            for (char c : {',', '\t', ';'})
                if (line.find(c) != std::string_view::npos) {
                    delim = c;
                    break;
                }
            if (!delim) throw ParseError("header must be delta,value[,sigma]", line_no);
            auto cols = split(line, delim);
            std::vector<std::string> names;
            for (auto c : cols) {
                std::string s(c);
                std::transform(s.begin(), s.end(), s.begin(),
                               [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
                names.push_back(s);
            }
            const bool two = names.size() == 2 && names[0] == "delta" && names[1] == "value";
            const bool three = names.size() == 3 && names[0] == "delta" && names[1] == "value" &&
                               names[2] == "sigma";
            if (!two && !three) throw ParseError("header must be delta,value[,sigma]", line_no);
            with_sigma = three;
            continue;
        }

        const auto cols = split(line, delim);
        const std::size_t expected = with_sigma ? 3 : 2;
        if (cols.size() != expected)
            throw ParseError("expected " + std::to_string(expected) + " columns, found " +
                                 std::to_string(cols.size()),
                             line_no);
        Row r{parse_number(cols[0], line_no, "delta"), parse_number(cols[1], line_no, "value"), 0.0,
              line_no};
        if (with_sigma) {
            r.sigma = parse_number(cols[2], line_no, "sigma");
            if (r.sigma < 0) throw ParseError("sigma must be >= 0", line_no);
        }
        rows.push_back(r);
    }
    if (!delim) throw ParseError("missing header", 0);
    if (rows.size() < 5)
        throw ParseError("need at least 5 data rows, found " + std::to_string(rows.size()), 0);

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.delta < b.delta; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].delta == rows[i - 1].delta)
            throw GridError("duplicate delta " + format_number(rows[i].delta) + " on lines " +
                            std::to_string(rows[i - 1].line) + " and " +
                            std::to_string(rows[i].line));

    Spectrum s;
    for (const auto& r : rows) {
        s.deltas.push_back(r.delta);
        s.values.push_back(r.value);
        if (with_sigma) s.uncertainties.push_back(r.sigma);
    }
    if (with_sigma) {
        const double sq = std::inner_product(s.uncertainties.begin(), s.uncertainties.end(),
                                             s.uncertainties.begin(), 0.0);
        s.sigma_exp = std::sqrt(sq / static_cast<double>(s.uncertainties.size()));
    }
    s.validate();
    return s;
}

Spectrum ingest_spectrum(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    Spectrum s = parse_spectrum(in);
    s.meta["source"] = "file";
    s.meta["path"] = path.string();
    return s;
}

std::string format_number(double x)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

std::string format_spectrum(const Spectrum& s)
{
    s.validate();
    const bool with_sigma = !s.uncertainties.empty();
    std::string out = with_sigma ? "delta,value,sigma\n" : "delta,value\n";
    for (std::size_t j = 0; j < s.size(); ++j) {
        out += format_number(s.deltas[j]);
        out += ',';
        out += format_number(s.values[j]);
        if (with_sigma) {
            out += ',';
            out += format_number(s.uncertainties[j]);
        }
        out += '\n';
    }
    return out;
}

void write_atomically(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

json to_json(const TlaParams& p)
{
    return {{"alpha", p.alpha},       {"omega", p.omega},       {"delta1", p.delta1},
            {"gamma_ab", p.gamma_ab}, {"gamma_bc", p.gamma_bc}};
}

json to_json(const CircuitParams& c)
{
    return {{"gamma_rel", c.gamma_rel}, {"gamma_ab", c.gamma_ab}, {"gamma_bc", c.gamma_bc},
            {"omega", c.omega}};
}

json to_json(const FitConfig& cfg)
{
    return {{"max_iterations", cfg.max_iterations},
            {"relative_tolerance", cfg.relative_tolerance},
            {"initial_damping", cfg.initial_damping},
            {"n_starts", cfg.n_starts},
            {"seed", cfg.seed}};
}

json to_json(const NoiseSpec& n)
{
    return {{"sigma", n.sigma}, {"seed", n.seed}, {"n_replicates", n.n_replicates}};
}

json to_json(const ModelParams& params)
{
    if (const auto* e = std::get_if<EitParams>(&params))
        return {{"c_plus", e->c_plus}, {"c_minus", e->c_minus}, {"g_plus", e->g_plus},
                {"g_minus", e->g_minus}};
    const auto& a = std::get<AtsParams>(params);
    return {{"c", a.c}, {"g", a.g}, {"d0", a.d0}};
}

json to_json(const FitResult& r)
{
    return {{"model", std::string(to_string(r.kind()))},
            {"k", parameter_count(r.kind())},
            {"params", to_json(r.params)},
            {"ssr", r.ssr},
            {"sigma_hat_sq", r.sigma_hat_sq},
            {"n_points", r.n_points},
            {"converged", r.converged},
            {"n_starts_agreeing", r.n_starts_agreeing},
            {"best_start", r.best_start},
            {"iterations", r.iterations}};
}

json to_json(const SelectionReport& r)
{
    json models = json::object();
    constexpr std::array kinds{ModelKind::Eit, ModelKind::Ats};
    for (std::size_t i = 0; i < 2; ++i) {
        json m = {{"aic", finite_or_null(r.aic[i])},
                  {"akaike_weight", r.akaike_weights[i]},
                  {"per_point_aic", finite_or_null(r.per_point_aic[i])},
                  {"per_point_weight", r.per_point_weights[i]},
                  {"fit", r.fits[i] ? to_json(*r.fits[i]) : json(nullptr)}};
        if (!r.fit_errors[i].empty()) m["fit_error"] = r.fit_errors[i];
        models[std::string(to_string(kinds[i]))] = std::move(m);
    }
    return {{"models", std::move(models)},
            {"n_points", r.n_points},
            {"verdict", std::string(to_string(r.verdict))},
            {"inconclusive_margin", r.inconclusive_margin},
            {"fit_failure", r.fit_failed()}};
}

json to_json(const SweepResult& r)
{
    json rows = json::array();
    for (std::size_t i = 0; i < r.axis.size(); ++i)
        rows.push_back({{"omega", r.axis[i]},
                        {"wbar_eit", r.per_point_weights[i][0]},
                        {"wbar_ats", r.per_point_weights[i][1]},
                        {"w_eit", r.akaike_weights[i][0]},
                        {"w_ats", r.akaike_weights[i][1]},
                        {"fit_failures", r.fit_failures[i]}});
    return {{"rows", std::move(rows)},
            {"crossover", optional_number(r.crossover)},
            {"akaike_crossover", optional_number(r.akaike_crossover)}};
}

json to_json(const BoundaryResult& r)
{
    json rows = json::array();
    for (std::size_t i = 0; i < r.gamma_bc.size(); ++i)
        rows.push_back({{"gamma_bc", r.gamma_bc[i]},
                        {"omega_aic", optional_number(r.omega_aic[i])},
                        {"depth", optional_number(r.depth_at_crossover[i])}});
    return {{"rows", std::move(rows)}};
}

std::string format_sweep_table(const SweepResult& r)
{
    std::string out = "omega,wbar_eit,wbar_ats,w_eit,w_ats,fit_failures\n";
    for (std::size_t i = 0; i < r.axis.size(); ++i) {
        out += format_number(r.axis[i]) + ',' + format_number(r.per_point_weights[i][0]) + ',' +
               format_number(r.per_point_weights[i][1]) + ',' +
               format_number(r.akaike_weights[i][0]) + ',' +
               format_number(r.akaike_weights[i][1]) + ',' + std::to_string(r.fit_failures[i]) +
               '\n';
    }
    return out;
}

std::string format_boundary_table(const BoundaryResult& r)
{
    std::string out = "gamma_bc,omega_aic,depth\n";
    for (std::size_t i = 0; i < r.gamma_bc.size(); ++i) {
        out += format_number(r.gamma_bc[i]) + ',' +
               (r.omega_aic[i] ? format_number(*r.omega_aic[i]) : std::string("nan")) + ',' +
               (r.depth_at_crossover[i] ? format_number(*r.depth_at_crossover[i])
                                        : std::string("nan")) +
               '\n';
    }
    return out;
}

} // namespace eitats
