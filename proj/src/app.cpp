#include "eitats/app.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "eitats/error.hpp"
#include "eitats/io.hpp"
#include "eitats/selection.hpp"

#ifndef EITATS_VERSION
#define EITATS_VERSION "unknown"
#endif

namespace eitats::app {

namespace {

using nlohmann::json;

constexpr std::array kCommands{std::pair{Command::Generate, "generate"},
                               std::pair{Command::Fit, "fit"},
                               std::pair{Command::Discriminate, "discriminate"},
                               std::pair{Command::Sweep, "sweep"},
                               std::pair{Command::Boundary, "boundary"},
                               std::pair{Command::Circuit, "circuit"}};

Command command_from_string(const std::string& name)
{
    for (const auto& [c, n] : kCommands)
        if (name == n) return c;
    throw DomainError("unknown command '" + name + "'");
}

json range_json(const Range& r) { return {{"lo", r.lo}, {"hi", r.hi}, {"step", r.step}}; }

Range range_from_json(const json& j) { return {j.at("lo"), j.at("hi"), j.at("step")}; }

json software() { return {{"name", "eitats"}, {"version", EITATS_VERSION}}; }

std::optional<std::filesystem::path> path_from_json(const json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return std::filesystem::path(j.at(key).get<std::string>());
}

RunConfig config_from_json(const json& j)
{
    RunConfig c;
    c.command = command_from_string(j.at("command"));
    c.input = path_from_json(j, "input");
    c.output = path_from_json(j, "output");
    c.report = path_from_json(j, "report");
    c.model = j.at("model");
    const auto& t = j.at("tla");
    c.tla = {t.at("alpha"), t.at("omega"), t.at("delta1"), t.at("gamma_ab"), t.at("gamma_bc")};
    const auto& k = j.at("circuit");
    c.circuit = {k.at("gamma_rel"), k.at("gamma_ab"), k.at("gamma_bc"), k.at("omega")};
    const auto& n = j.at("noise");
    c.noise = {n.at("sigma"), n.at("seed"), n.at("n_replicates")};
    const auto& f = j.at("fit");
    c.fit = {f.at("max_iterations"), f.at("relative_tolerance"), f.at("initial_damping"),
             f.at("n_starts"), f.at("seed")};
    c.margin = j.at("margin");
    c.grid = range_from_json(j.at("grid"));
    c.omegas = range_from_json(j.at("omegas"));
    c.gbc_values = range_from_json(j.at("gbc_values"));
    return c;
}

Spectrum load_or_synthesize(const RunConfig& cfg)
{
    if (cfg.input) return ingest_spectrum(*cfg.input);
    Spectrum s = absorption_profile(cfg.tla, cfg.grid.values());
    if (cfg.noise.sigma > 0) s = add_noise(s, cfg.noise, 0);
    return s;
}

json spectrum_summary(const Spectrum& s)
{
    json meta = json::object();
    for (const auto& [k, v] : s.meta) meta[k] = v;
    return {{"n_points", s.size()},
            {"delta_min", s.deltas.front()},
            {"delta_max", s.deltas.back()},
            {"sigma_exp", s.sigma_exp ? json(*s.sigma_exp) : json(nullptr)},
            {"meta", std::move(meta)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

std::string to_string(Command c)
{
    for (const auto& [cmd, n] : kCommands)
        if (cmd == c) return n;
    return "unknown";
}

Range parse_range(const std::string& text)
{
    Range r;
    double* fields[] = {&r.lo, &r.hi, &r.step};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const auto end = i < 2 ? text.find(':', pos) : text.size();
        if (end == std::string::npos) throw DomainError("range '" + text + "' must be lo:hi:step");
        const char* first = text.data() + pos;
        const char* last = text.data() + end;
        if (first != last && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, *fields[i]);
        if (ec != std::errc{} || ptr != last || first == last)
            throw DomainError("range '" + text + "' must be lo:hi:step");
        pos = end + 1;
    }
    if (!(r.step > 0) || !(r.hi >= r.lo)) throw DomainError("range '" + text + "' needs lo <= hi and step > 0");
    return r;
}

void RunConfig::validate() const
{
    tla.validate();
    circuit.validate();
    noise.validate();
    fit.validate();
    if (!(margin >= 0) || !(margin <= 1)) throw DomainError("margin must lie in [0, 1]");
    if (model != "eit" && model != "ats" && model != "both")
        throw DomainError("model must be eit, ats or both");
    if (command == Command::Generate && !output)
        throw DomainError("generate requires --output");
    if (input && (command == Command::Generate || command == Command::Sweep ||
                  command == Command::Boundary || command == Command::Circuit))
        throw DomainError("--input is only accepted by fit and discriminate");
    for (const Range* r : {&grid, &omegas, &gbc_values})
        if (!(r->step > 0) || !(r->hi >= r->lo)) throw DomainError("ranges need lo <= hi and step > 0");
}

RunConfig circuit_preset()
{
    RunConfig c;
    c.command = Command::Circuit;
    c.circuit = CircuitParams{11.0, 7.2, 0.96 * 7.2, 6.0};
    c.grid = {-30.0, 30.0, 0.25};
    return c;
}

json to_json(const RunConfig& c)
{
    const auto path = [](const std::optional<std::filesystem::path>& p) {
        return p ? json(p->string()) : json(nullptr);
    };
    return {{"command", to_string(c.command)},
            {"input", path(c.input)},
            {"output", path(c.output)},
            {"report", path(c.report)},
            {"model", c.model},
            {"tla", eitats::to_json(c.tla)},
            {"circuit", eitats::to_json(c.circuit)},
            {"noise", eitats::to_json(c.noise)},
            {"fit", eitats::to_json(c.fit)},
            {"margin", c.margin},
            {"grid", range_json(c.grid)},
            {"omegas", range_json(c.omegas)},
            {"gbc_values", range_json(c.gbc_values)}};
}

Parsed parse_command_line(int argc, const char* const* argv)
{
    CLI::App cli{"Discriminate electromagnetically induced transparency from Autler-Townes "
                 "splitting with Akaike information",
                 "discriminator"};
    cli.set_version_flag("--version", std::string(EITATS_VERSION));

    std::string command, config_path, grid, omegas, gbc, input, output, report, model;
    double gamma_ab = 0, gamma_bc = 0, gamma_rel = 0, omega = 0, delta1 = 0, alpha = 0;
    double sigma = 0, margin = 0, tolerance = 0;
    std::uint64_t seed = 0;
    int starts = 0, replicates = 0, max_iterations = 0;

    cli.add_option("command", command, "generate | fit | discriminate | sweep | boundary | circuit")
        ->check(CLI::IsMember({"generate", "fit", "discriminate", "sweep", "boundary", "circuit"}));
    cli.add_option("--config", config_path, "Start from the 'config' object of an earlier report")
        ->check(CLI::ExistingFile);
    cli.add_option("--gamma-ab", gamma_ab, "Dephasing rate of the probed transition");
    cli.add_option("--gamma-bc", gamma_bc, "Ground-state coherence dephasing rate");
    cli.add_option("--gamma-rel", gamma_rel, "Population relaxation rate (circuit)");
    cli.add_option("--omega", omega, "Pump Rabi frequency / control amplitude");
    cli.add_option("--delta1", delta1, "One-photon detuning");
    cli.add_option("--alpha", alpha, "Probe Rabi frequency");
    cli.add_option("--sigma", sigma, "Relative Gaussian noise level");
    cli.add_option("--seed", seed, "Seed for noise and multi-start guesses");
    cli.add_option("--starts", starts, "Multi-start count");
    cli.add_option("--replicates", replicates, "Noise replicates per sweep point");
    cli.add_option("--max-iterations", max_iterations, "Levenberg-Marquardt iteration cap");
    cli.add_option("--tolerance", tolerance, "Relative SSR change for convergence");
    cli.add_option("--margin", margin, "Inconclusive margin on |w_EIT - w_ATS|");
    cli.add_option("--grid", grid, "Detuning grid lo:hi:step (use --grid=lo:hi:step for negative lo)");
    cli.add_option("--omegas", omegas, "Sweep pump range lo:hi:step");
    cli.add_option("--gbc-values", gbc, "Boundary gamma_bc range lo:hi:step");
    cli.add_option("--model", model, "fit: eit, ats or both")->check(CLI::IsMember({"eit", "ats", "both"}));
    cli.add_option("--input", input, "Spectrum CSV (delta,value[,sigma])");
    cli.add_option("--output", output, "Primary output file");
    cli.add_option("--report", report, "Also write the JSON report here");

    Parsed parsed;
    try {
        cli.parse(argc, argv);
        if (command.empty() && config_path.empty()) throw CLI::RequiredError("command");
    } catch (const CLI::ParseError& e) {
        std::ostringstream out, err;
        parsed.exit_code = cli.exit(e, out, err);
        parsed.message = out.str() + err.str();
        return parsed;
    }

    RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        json j = json::parse(in);
        cfg = config_from_json(j.contains("config") ? j.at("config") : j);
    } else if (command == "circuit") {
        cfg = circuit_preset();
    }
    if (!command.empty()) cfg.command = command_from_string(command);

    const auto given = [&](const char* flag) { return cli.count(flag) > 0; };
    const bool circuit = cfg.command == Command::Circuit;
    if (given("--gamma-ab")) (circuit ? cfg.circuit.gamma_ab : cfg.tla.gamma_ab) = gamma_ab;
    if (given("--gamma-bc")) (circuit ? cfg.circuit.gamma_bc : cfg.tla.gamma_bc) = gamma_bc;
    if (given("--omega")) (circuit ? cfg.circuit.omega : cfg.tla.omega) = omega;
    if (given("--gamma-rel")) cfg.circuit.gamma_rel = gamma_rel;
    if (given("--delta1")) cfg.tla.delta1 = delta1;
    if (given("--alpha")) cfg.tla.alpha = alpha;
    if (given("--sigma")) cfg.noise.sigma = sigma;
    if (given("--seed")) cfg.noise.seed = cfg.fit.seed = seed;
    if (given("--starts")) cfg.fit.n_starts = starts;
    if (given("--replicates")) cfg.noise.n_replicates = replicates;
    if (given("--max-iterations")) cfg.fit.max_iterations = max_iterations;
    if (given("--tolerance")) cfg.fit.relative_tolerance = tolerance;
    if (given("--margin")) cfg.margin = margin;
    if (given("--grid")) cfg.grid = parse_range(grid);
    if (given("--omegas")) cfg.omegas = parse_range(omegas);
    if (given("--gbc-values")) cfg.gbc_values = parse_range(gbc);
    if (given("--model")) cfg.model = model;
    if (given("--input")) cfg.input = input;
    if (given("--output")) cfg.output = output;
    if (given("--report")) cfg.report = report;
    parsed.config = std::move(cfg);
    return parsed;
}

Outcome run(const RunConfig& cfg)
{
    Outcome out;
    out.report = {{"software", software()}, {"config", to_json(cfg)}};
    json& r = out.report;
    try {
        cfg.validate();
        const SweepOptions sweep_opts{cfg.grid.values(), cfg.fit, cfg.margin};

        switch (cfg.command) {
        case Command::Generate: {
            Spectrum s = absorption_profile(cfg.tla, cfg.grid.values());
            if (cfg.noise.sigma > 0) s = add_noise(s, cfg.noise, 0);
            write_atomically(*cfg.output, format_spectrum(s));
            r["spectrum"] = spectrum_summary(s);
            break;
        }
        case Command::Fit: {
            const Spectrum s = load_or_synthesize(cfg);
            r["spectrum"] = spectrum_summary(s);
            json fits = json::object();
            if (cfg.model != "ats") fits["EIT"] = to_json(fit(ModelKind::Eit, s, cfg.fit));
            if (cfg.model != "eit") fits["ATS"] = to_json(fit(ModelKind::Ats, s, cfg.fit));
            r["fits"] = std::move(fits);
            break;
        }
        case Command::Discriminate: {
            const Spectrum s = load_or_synthesize(cfg);
            r["spectrum"] = spectrum_summary(s);
            r["selection"] = to_json(discriminate(s, cfg.fit, cfg.margin));
            break;
        }
        case Command::Circuit: {
            const Spectrum s = transmission_profile(cfg.circuit, cfg.grid.values());
            r["spectrum"] = spectrum_summary(s);
            r["selection"] = to_json(discriminate(s, cfg.fit, cfg.margin));
            break;
        }
        case Command::Sweep: {
            const auto axis = cfg.omegas.values();
            const auto sweep = sweep_omega(cfg.tla.gamma_ab, cfg.tla.gamma_bc, cfg.noise, axis, sweep_opts);
            r["sweep"] = to_json(sweep);
            if (cfg.output) write_atomically(*cfg.output, format_sweep_table(sweep));
            break;
        }
        case Command::Boundary: {
            const auto axis = cfg.omegas.values();
            const auto gbc = cfg.gbc_values.values();
            const auto boundary = sweep_gbc_boundary(cfg.tla.gamma_ab, gbc, cfg.noise, axis, sweep_opts);
            r["boundary"] = to_json(boundary);
            if (cfg.output) write_atomically(*cfg.output, format_boundary_table(boundary));
            break;
        }
        }
        r["status"] = "ok";

        const bool report_is_output = cfg.command == Command::Fit ||
                                      cfg.command == Command::Discriminate ||
                                      cfg.command == Command::Circuit;
        if (report_is_output && cfg.output) write_atomically(*cfg.output, dump(r));
        if (cfg.report) write_atomically(*cfg.report, dump(r));
    } catch (const Error& e) {
        r["status"] = "error";
        r["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        out.exit_code = 1;
    } catch (const json::exception& e) {
        r["status"] = "error";
        r["error"] = {{"kind", "config"}, {"message", e.what()}};
        out.exit_code = 1;
    }
    return out;
}

} // namespace eitats::app
