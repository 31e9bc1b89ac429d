#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "eitats/app.hpp"
#include "eitats/io.hpp"
#include "eitats/lineshape.hpp"
#include "eitats/selection.hpp"

using namespace eitats;
using namespace eitats::app;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

Parsed parse(std::vector<const char*> args)
{
    args.insert(args.begin(), "discriminator");
    return parse_command_line(static_cast<int>(args.size()), args.data());
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct Scratch {
    fs::path dir = fs::temp_directory_path() / ("eitats_app_" + std::to_string(std::random_device{}()));
    Scratch() { fs::create_directories(dir); }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const char* name) const { return (dir / name).string(); }
    bool has_temporaries() const
    {
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".tmp") return true;
        return false;
    }
};

} // namespace

TEST_CASE("range parsing", "[cli]")
{
    const auto r = parse_range("-5:5:0.05");
    CHECK(r.lo == -5.0);
    CHECK(r.hi == 5.0);
    CHECK(r.step == 0.05);
    CHECK(r.values().size() == 201);
    CHECK_THROWS(parse_range("1:2"));
    CHECK_THROWS(parse_range("a:b:c"));
    CHECK_THROWS(parse_range("1:2:0"));
}

TEST_CASE("command-line parsing", "[cli]")
{
    SECTION("flags land in the resolved configuration")
    {
        const auto p = parse({"discriminate", "--gamma-ab", "2", "--gamma-bc", "0.3", "--omega", "0.7",
                              "--sigma", "0.05", "--seed", "12", "--starts", "5", "--margin", "0.2",
                              "--grid=-3:3:0.1"});
        REQUIRE(p.config.has_value());
        const auto& c = *p.config;
        CHECK(c.command == Command::Discriminate);
        CHECK(c.tla.gamma_ab == 2.0);
        CHECK(c.tla.gamma_bc == 0.3);
        CHECK(c.tla.omega == 0.7);
        CHECK(c.noise.sigma == 0.05);
        CHECK(c.noise.seed == 12);
        CHECK(c.fit.seed == 12);
        CHECK(c.fit.n_starts == 5);
        CHECK(c.margin == 0.2);
        CHECK(c.grid.lo == -3.0);
        CHECK(c.grid.values().size() == 61);
    }
    SECTION("circuit preset and overrides")
    {
        const auto p = parse({"circuit"});
        REQUIRE(p.config.has_value());
        CHECK(p.config->circuit.gamma_rel == 11.0);
        CHECK(p.config->circuit.gamma_ab == 7.2);
        CHECK(p.config->circuit.omega == 6.0);
        CHECK(p.config->grid.values().size() == 241);
        const auto q = parse({"circuit", "--omega", "3"});
        CHECK(q.config->circuit.omega == 3.0);
    }
    SECTION("help, version and usage errors exit without a configuration")
    {
        const auto help = parse({"--help"});
        CHECK_FALSE(help.config.has_value());
        CHECK(help.exit_code == 0);
        CHECK(help.message.find("--gamma-ab") != std::string::npos);

        const auto version = parse({"--version"});
        CHECK_FALSE(version.config.has_value());
        CHECK(version.exit_code == 0);

        const auto bad = parse({"frobnicate"});
        CHECK_FALSE(bad.config.has_value());
        CHECK(bad.exit_code != 0);

        const auto not_number = parse({"discriminate", "--omega", "fast"});
        CHECK_FALSE(not_number.config.has_value());
        CHECK(not_number.exit_code != 0);
    }
}

TEST_CASE("generate then discriminate matches the in-process verdict", "[cli][e2e]")
{
    Scratch tmp;
    const auto csv = tmp / "omega0.2.csv";
    const auto report = tmp / "report.json";

    auto gen = parse({"generate", "--omega", "0.2", "--output", csv.c_str()});
    REQUIRE(gen.config.has_value());
    const auto g = run(*gen.config);
    REQUIRE(g.exit_code == 0);
    CHECK(g.report["status"] == "ok");

    auto dis = parse({"discriminate", "--input", csv.c_str(), "--output", report.c_str()});
    REQUIRE(dis.config.has_value());
    const auto d = run(*dis.config);
    REQUIRE(d.exit_code == 0);

    TlaParams p;
    p.omega = 0.2;
    const auto direct = discriminate(absorption_profile(p, default_grid()));
    CHECK(d.report["selection"]["verdict"] == "EIT");
    CHECK(d.report["selection"]["verdict"] == std::string(to_string(direct.verdict)));
    CHECK(d.report["selection"]["models"]["EIT"]["per_point_weight"].get<double>() ==
          direct.per_point_weights[0]);

    const auto written = nlohmann::json::parse(slurp(report));
    CHECK(written == d.report);
    CHECK(written["config"]["fit"]["n_starts"] == 16);
    CHECK(written["selection"]["models"]["ATS"]["fit"]["k"] == 3);
    CHECK_FALSE(tmp.has_temporaries());
}

TEST_CASE("reports are reproducible and rerunnable from their echoed configuration", "[cli][e2e]")
{
    Scratch tmp;
    const auto first = tmp / "first.json";
    const auto second = tmp / "second.json";
    const auto p = parse({"discriminate", "--omega", "0.3", "--sigma", "0.05", "--seed", "4", "--starts", "4",
                          "--report", first.c_str()});
    REQUIRE(p.config.has_value());
    const auto a = run(*p.config);
    const auto b = run(*p.config);
    REQUIRE(a.exit_code == 0);
    CHECK(a.report.dump() == b.report.dump());

    // rerun through --config with a different report path
    const auto q = parse({"discriminate", "--config", first.c_str(), "--report", second.c_str()});
    REQUIRE(q.config.has_value());
    const auto c = run(*q.config);
    REQUIRE(c.exit_code == 0);
    CHECK(c.report["selection"] == a.report["selection"]);
    CHECK(c.report["config"]["noise"] == a.report["config"]["noise"]);
}

TEST_CASE("circuit command", "[cli][e2e]")
{
    const auto p = parse({"circuit"});
    const auto o = run(*p.config);
    REQUIRE(o.exit_code == 0);
    CHECK(o.report["selection"]["verdict"] == "ATS");
    CHECK(o.report["selection"]["models"]["EIT"]["per_point_weight"].get<double>() == Approx(0.03).margin(0.02));
    CHECK(o.report["spectrum"]["n_points"] == 241);
}

TEST_CASE("sweep command writes a plot-ready table", "[cli][e2e]")
{
    Scratch tmp;
    const auto table = tmp / "sweep.csv";
    const auto p = parse({"sweep", "--omegas", "0.8:0.95:0.01", "--output", table.c_str()});
    const auto o = run(*p.config);
    REQUIRE(o.exit_code == 0);
    const double crossover = o.report["sweep"]["crossover"].get<double>();
    CHECK(crossover >= 0.8);
    CHECK(crossover <= 0.95);
    const auto text = slurp(table);
    CHECK(text.rfind("omega,wbar_eit,wbar_ats,w_eit,w_ats,fit_failures\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 17);
}

TEST_CASE("failures are reported with a nonzero status and no artifact", "[cli][errors]")
{
    Scratch tmp;
    const auto out = tmp / "never.json";
    const auto missing = parse({"discriminate", "--input", "/nonexistent/data.csv", "--output", out.c_str()});
    REQUIRE(missing.config.has_value());
    const auto o = run(*missing.config);
    CHECK(o.exit_code == 1);
    CHECK(o.report["status"] == "error");
    CHECK(o.report["error"]["kind"] == "io");
    CHECK_FALSE(fs::exists(out));

    const auto no_output = parse({"generate", "--omega", "0.2"});
    if (no_output.config) {
        CHECK(run(*no_output.config).exit_code == 1);
    } else {
        CHECK(no_output.exit_code != 0);
    }

    const auto bad_rates = parse({"discriminate", "--gamma-ab", "-1"});
    if (bad_rates.config) CHECK(run(*bad_rates.config).report["error"]["kind"] == "domain");
}

TEST_CASE("the executable", "[cli][process]")
{
    Scratch tmp;
    const std::string exe = EITATS_DISCRIMINATOR;
    const auto csv = tmp / "g.csv";
    CHECK(std::system((exe + " generate --omega 0.2 --output " + csv + " > /dev/null").c_str()) == 0);
    CHECK(fs::exists(csv));
    const int status = std::system((exe + " discriminate --input /nonexistent.csv > /dev/null").c_str());
    CHECK(status != 0);
}
