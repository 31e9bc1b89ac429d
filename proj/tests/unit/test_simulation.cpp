#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "eitats/error.hpp"
#include "eitats/lineshape.hpp"
#include "eitats/random.hpp"
#include "eitats/simulation.hpp"

using namespace eitats;
using Catch::Approx;

namespace {

Spectrum lambda_profile(double omega)
{
    TlaParams p;
    p.omega = omega;
    return absorption_profile(p, default_grid());
}

bool same_bits(const std::vector<std::array<double, 2>>& a, const std::vector<std::array<double, 2>>& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(a[0])) == 0;
}

} // namespace

TEST_CASE("counter-based normal stream", "[simulation][rng]")
{
    const CounterRng rng(11, 3);
    const int n = 200000;
    double m1 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(static_cast<std::uint64_t>(i));
        m1 += x;
        m2 += x * x;
    }
    m1 /= n;
    m2 /= n;
    CHECK(std::abs(m1) < 4 / std::sqrt(double(n)));
    CHECK(std::abs(m2 - 1) < 4 * std::sqrt(2.0 / n));

    CHECK(rng.bits(5) == CounterRng(11, 3).bits(5));
    CHECK(rng.bits(5) != CounterRng(11, 4).bits(5));
    CHECK(rng.bits(5) != CounterRng(12, 3).bits(5));
    for (std::uint64_t i = 0; i < 1000; ++i) {
        CHECK(rng.uniform(i) > 0.0);
        CHECK(rng.uniform(i) < 1.0);
    }
}

TEST_CASE("multiplicative noise", "[simulation]")
{
    const auto clean = lambda_profile(0.3);

    SECTION("zero sigma is the identity")
    {
        const auto out = add_noise(clean, NoiseSpec{0.0, 1, 1}, 0);
        CHECK(out.values == clean.values);
        CHECK(out.deltas == clean.deltas);
    }
    SECTION("relative perturbations have zero mean within three standard errors")
    {
        const NoiseSpec spec{0.1, 2024, 1};
        const auto out = add_noise(clean, spec, 0);
        double mean = 0;
        for (std::size_t j = 0; j < clean.size(); ++j) mean += out.values[j] / clean.values[j] - 1;
        mean /= static_cast<double>(clean.size());
        CHECK(std::abs(mean) <= 3 * 0.1 / std::sqrt(201.0));
        REQUIRE(out.sigma_exp.has_value());
        CHECK(*out.sigma_exp == 0.1);
    }
    SECTION("each point follows (1 + sigma xi) A with xi from the (seed, replicate, point) stream")
    {
        const NoiseSpec spec{0.05, 9, 4};
        const auto out = add_noise(clean, spec, 2);
        const CounterRng rng(9, 2);
        for (std::size_t j = 0; j < clean.size(); ++j)
            CHECK(out.values[j] == clean.values[j] * (1 + 0.05 * rng.normal(j)));
    }
    SECTION("determinism and replicate independence")
    {
        const NoiseSpec spec{0.1, 5, 3};
        CHECK(add_noise(clean, spec, 1).values == add_noise(clean, spec, 1).values);
        CHECK(add_noise(clean, spec, 1).values != add_noise(clean, spec, 2).values);
        CHECK_THROWS_AS(add_noise(clean, spec, 3), DomainError);
        CHECK_THROWS_AS(add_noise(clean, spec, -1), DomainError);
        CHECK_THROWS_AS(add_noise(clean, NoiseSpec{0.5, 0, 1}, 0), DomainError);
        CHECK_THROWS_AS(add_noise(clean, NoiseSpec{0.1, 0, 0}, 0), DomainError);
    }
}

TEST_CASE("crossover interpolation", "[simulation]")
{
    const std::vector<double> axis{0.0, 1.0, 2.0, 3.0};
    const std::vector<std::array<double, 2>> w{{1.0, 0.0}, {0.8, 0.2}, {0.4, 0.6}, {0.0, 1.0}};
    // difference 0.6 at 1 and -0.2 at 2
    CHECK(*find_crossover(axis, w) == Approx(1.75).epsilon(1e-14));

    const std::vector<std::array<double, 2>> never{{1, 0}, {0.9, 0.1}, {0.8, 0.2}, {0.7, 0.3}};
    CHECK_FALSE(find_crossover(axis, never).has_value());

    // a - to + change is not a crossover
    const std::vector<std::array<double, 2>> back{{0, 1}, {1, 0}, {1, 0}, {0.2, 0.8}};
    CHECK(*find_crossover(axis, back) == Approx(2.0 + 1.0 / 1.6));
}

TEST_CASE("noiseless sweep near the transition", "[simulation][sweep]")
{
    const auto omegas = make_grid(0.8, 0.95, 0.01);
    const auto par = sweep_omega(1.0, 0.1, NoiseSpec{}, omegas, {}, Execution::Parallel);
    const auto ser = sweep_omega(1.0, 0.1, NoiseSpec{}, omegas, {}, Execution::Serial);
    CHECK(same_bits(par.per_point_weights, ser.per_point_weights));
    CHECK(same_bits(par.akaike_weights, ser.akaike_weights));
    CHECK(par.axis == omegas);
    REQUIRE(par.crossover.has_value());
    REQUIRE(par.akaike_crossover.has_value());
    CHECK(*par.crossover >= 0.8);
    CHECK(*par.crossover <= 0.95);
    CHECK(*par.akaike_crossover == Approx(*par.crossover).margin(0.02));
    for (int f : par.fit_failures) CHECK(f == 0);
}

TEST_CASE("weak-pump region has vanishing ATS weight", "[simulation][sweep]")
{
    const auto omegas = make_grid(0.05, 0.40, 0.05);
    const auto r = sweep_omega(1.0, 0.1, NoiseSpec{}, omegas);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        CAPTURE(omegas[i]);
        CHECK(r.per_point_weights[i][1] <= 1e-3);
    }
    CHECK_FALSE(r.crossover.has_value());
}

TEST_CASE("noise degrades model separation", "[simulation][sweep][noise]")
{
    const std::vector<double> omegas{0.2, 1.2};
    SweepOptions opts;
    opts.fit.n_starts = 8;
    double previous[2] = {INFINITY, INFINITY};
    for (double sigma : {0.0, 0.01, 0.1}) {
        const auto r = sweep_omega(1.0, 0.1, NoiseSpec{sigma, 3, 40}, omegas, opts);
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            const double gap = std::abs(r.per_point_weights[i][0] - r.per_point_weights[i][1]);
            CAPTURE(sigma, omegas[i]);
            CHECK(gap <= previous[i] + 1e-12);
            previous[i] = gap;
        }
    }
}

TEST_CASE("noisy sweeps are reproducible", "[simulation][sweep][noise]")
{
    const std::vector<double> omegas{0.1, 0.5};
    SweepOptions opts;
    opts.fit.n_starts = 4;
    const NoiseSpec noise{0.1, 77, 6};
    const auto a = sweep_omega(1.0, 0.1, noise, omegas, opts, Execution::Parallel);
    const auto b = sweep_omega(1.0, 0.1, noise, omegas, opts, Execution::Serial);
    CHECK(same_bits(a.per_point_weights, b.per_point_weights));
    CHECK(a.fit_failures == b.fit_failures);
}

TEST_CASE("transition boundary falls with the coherence decay rate", "[simulation][boundary]")
{
    const std::vector<double> gbc{0.01, 0.1, 0.2};
    const auto omegas = make_grid(0.7, 1.0, 0.02);
    const auto b = sweep_gbc_boundary(1.0, gbc, NoiseSpec{}, omegas);
    REQUIRE(b.omega_aic.size() == 3);
    for (const auto& o : b.omega_aic) REQUIRE(o.has_value());
    CHECK(*b.omega_aic[0] > *b.omega_aic[1]);
    CHECK(*b.omega_aic[1] > *b.omega_aic[2]);
    CHECK(*b.omega_aic[1] == Approx(0.86).margin(0.05));
    for (std::size_t i = 0; i < gbc.size(); ++i) {
        REQUIRE(b.depth_at_crossover[i].has_value());
        TlaParams p;
        p.gamma_bc = gbc[i];
        p.omega = *b.omega_aic[i];
        CHECK(*b.depth_at_crossover[i] == Approx(transparency_depth(p)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(sweep_gbc_boundary(1.0, std::vector<double>{1.0}, NoiseSpec{}, omegas), DomainError);
}
