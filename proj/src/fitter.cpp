#include "eitats/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "eitats/error.hpp"
#include "eitats/random.hpp"

namespace eitats {

namespace {

// Each model evaluates the value and its gradient in one pass over the shared
// denominators; these must agree with eval_* / jacobian_* in models.cpp.
struct EitModel {
    static constexpr int K = 4;
    using Vec = Eigen::Matrix<double, K, 1>;

    static double value(const Vec& x, double d) { return eval_eit({x[0], x[1], x[2], x[3]}, d); }
    static double value_and_gradient(const Vec& x, double d, Vec& g)
    {
        const double d2 = d * d;
        const double broad = 1.0 / (x[2] * x[2] + d2);
        const double narrow = 1.0 / (x[3] * x[3] + d2);
        const double pos = x[0] * x[0] * broad;
        const double neg = x[1] * x[1] * narrow;
        g[0] = 2.0 * x[0] * broad;
        g[1] = -2.0 * x[1] * narrow;
        g[2] = -2.0 * x[2] * pos * broad;
        g[3] = 2.0 * x[3] * neg * narrow;
        return pos - neg;
    }
};

struct AtsModel {
    static constexpr int K = 3;
    using Vec = Eigen::Matrix<double, K, 1>;

    static double value(const Vec& x, double d) { return eval_ats({x[0], x[1], x[2]}, d); }
    static double value_and_gradient(const Vec& x, double d, Vec& g)
    {
        const double g2 = x[1] * x[1];
        const double lo = d - x[2];
        const double hi = d + x[2];
        const double l1 = 1.0 / (g2 + lo * lo);
        const double l2 = 1.0 / (g2 + hi * hi);
        const double c2 = x[0] * x[0];
        g[0] = 2.0 * x[0] * (l1 + l2);
        g[1] = -2.0 * x[1] * c2 * (l1 * l1 + l2 * l2);
        g[2] = 2.0 * c2 * (lo * l1 * l1 - hi * l2 * l2);
        return c2 * (l1 + l2);
    }
};

// Damping beyond this means no representable step lowers the SSR: the point
// is stationary to working precision.
constexpr double kMaxDamping = 1e16;
constexpr double kMinDamping = 1e-20;
constexpr double kGradientTolerance = 1e-12;

template <class Model>
double sum_squares(const typename Model::Vec& x, const Spectrum& data)
{
    double ssr = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j) {
        const double e = data.values[j] - Model::value(x, data.deltas[j]);
        ssr += e * e;
    }
    return ssr;
}

template <class Model>
LmRun run_lm(const Spectrum& data, const std::vector<double>& start, const FitConfig& cfg)
{
    using Vec = typename Model::Vec;
    using Mat = Eigen::Matrix<double, Model::K, Model::K>;

    Vec x = Eigen::Map<const Vec>(start.data());
    double ssr = sum_squares<Model>(x, data);

    LmRun run;
    run.ssr_history.push_back(ssr);
    if (!std::isfinite(ssr)) {
        run.params = start;
        run.ssr = ssr;
        return run;
    }

    double damping = cfg.initial_damping;
    for (run.iterations = 0; run.iterations < cfg.max_iterations; ++run.iterations) {
        if (ssr == 0.0) {
            run.converged = true;
            break;
        }

        Mat normal = Mat::Zero();
        Vec rhs = Vec::Zero();
        Vec g;
        for (std::size_t j = 0; j < data.size(); ++j) {
            const double e = data.values[j] - Model::value_and_gradient(x, data.deltas[j], g);
            normal.noalias() += g * g.transpose();
            rhs.noalias() += e * g;
        }

        Vec diag = normal.diagonal();
        const double diag_max = diag.maxCoeff();
        if (!(diag_max > 0)) break; // flat Jacobian, nothing to follow

        double cosine = 0.0;
        for (int k = 0; k < Model::K; ++k)
            if (diag[k] > 0) cosine = std::max(cosine, std::abs(rhs[k]) / std::sqrt(diag[k] * ssr));
        if (cosine < kGradientTolerance) {
            run.converged = true;
            break;
        }
        for (int k = 0; k < Model::K; ++k)
            diag[k] = std::max(diag[k], 1e-15 * diag_max);

        bool accepted = false;
        while (!accepted) {
            Mat damped = normal;
            damped.diagonal() += damping * diag;
            const Vec step = damped.ldlt().solve(rhs);
            const Vec trial = x + step;
            const double trial_ssr = sum_squares<Model>(trial, data);
            if (std::isfinite(trial_ssr) && trial_ssr < ssr) {
                const double change = (ssr - trial_ssr) / ssr;
                x = trial;
                ssr = trial_ssr;
                run.ssr_history.push_back(ssr);
                damping = std::max(damping / 10.0, kMinDamping);
                accepted = true;
                if (change < cfg.relative_tolerance) run.converged = true;
            } else {
                damping *= 10.0;
                if (damping > kMaxDamping) {
                    run.converged = true;
                    break;
                }
            }
        }
        if (run.converged) {
            ++run.iterations;
            break;
        }
    }

    run.params.assign(x.data(), x.data() + Model::K);
    run.ssr = ssr;
    return run;
}

struct Features {
    double peak = 0.0;       // maximum value
    double peak_at = 0.0;    // detuning of the maximum
    double outer_hwhm = 0.0; // half-width of the peak on its outer flank
    double half_width = 0.0; // half the span of points above peak/2
    double centre = 0.0;     // value nearest delta = 0
    std::size_t centre_index = 0;
    double step = 1.0;
};

Features features(const Spectrum& data)
{
    Features f;
    const std::size_t n = data.size();
    const auto& v = data.values;
    const auto& d = data.deltas;
    f.step = (d.back() - d.front()) / static_cast<double>(n - 1);

    const auto im = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    f.peak = v[im];
    f.peak_at = d[im];
    if (!(f.peak > 0)) {
        f.peak = 0.0;
        for (double x : v) f.peak = std::max(f.peak, std::abs(x));
    }
    const double half = f.peak / 2.0;
    const double range = d.back() - d.front();

    f.outer_hwhm = range / 4.0;
    if (d[im] < 0) {
        for (std::size_t j = im; j-- > 0;)
            if (v[j] < half) {
                f.outer_hwhm = d[im] - d[j];
                break;
            }
    } else {
        for (std::size_t j = im + 1; j < n; ++j)
            if (v[j] < half) {
                f.outer_hwhm = d[j] - d[im];
                break;
            }
    }

    std::size_t lo = n, hi = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (v[j] >= half) {
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
    f.half_width = lo <= hi ? (d[hi] - d[lo]) / 2.0 : range / 4.0;

    std::size_t ic = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(d[j]) < std::abs(d[ic])) ic = j;
    f.centre_index = ic;
    f.centre = v[ic];
    return f;
}

std::vector<double> first_guess(ModelKind kind, const Spectrum& data)
{
    const Features f = features(data);
    if (kind == ModelKind::Ats) {
        const double d0 = std::abs(f.peak_at);
        const double g = std::max(f.outer_hwhm, f.step);
        const double overlap = g * g / (g * g + 4.0 * d0 * d0);
        return {g * std::sqrt(f.peak / (1.0 + overlap)), g, d0};
    }

    const double broad = std::max(f.half_width, f.step);
    const double depth = f.peak - f.centre;
    double narrow = broad / 4.0;
    if (depth > 0.01 * f.peak) {
        const double level = (f.centre + f.peak) / 2.0;
        for (std::size_t j = f.centre_index; j < data.size(); ++j)
            if (data.values[j] >= level) {
                narrow = std::max(data.deltas[j] - data.deltas[f.centre_index], f.step);
                break;
            }
    }
    const double c_plus = broad * std::sqrt(f.peak);
    const double c_minus = narrow * std::sqrt(std::max(depth, 0.01 * f.peak));
    return {c_plus, c_minus, broad, narrow};
}

void check_data(ModelKind kind, const Spectrum& data)
{
    data.validate();
    const int k = parameter_count(kind);
    if (data.size() <= static_cast<std::size_t>(k))
        throw FitError(FitError::Reason::TooFewPoints,
                       "fit: need more than " + std::to_string(k) + " points for " +
                           std::string(to_string(kind)));
    const auto [lo, hi] = std::minmax_element(data.values.begin(), data.values.end());
    if (*lo == *hi)
        throw FitError(FitError::Reason::DegenerateData, "fit: all values are equal");
}

} // namespace

void FitConfig::validate() const
{
    if (max_iterations < 1) throw DomainError("FitConfig: max_iterations must be >= 1");
    if (!(relative_tolerance > 0)) throw DomainError("FitConfig: relative_tolerance must be > 0");
    if (!(initial_damping > 0)) throw DomainError("FitConfig: initial_damping must be > 0");
    if (n_starts < 1) throw DomainError("FitConfig: n_starts must be >= 1");
}

LmRun levenberg_marquardt(ModelKind kind, const Spectrum& data, std::vector<double> start,
                          const FitConfig& cfg)
{
    cfg.validate();
    check_data(kind, data);
    if (start.size() != static_cast<std::size_t>(parameter_count(kind)))
        throw DomainError("levenberg_marquardt: wrong number of starting parameters");
    return kind == ModelKind::Eit ? run_lm<EitModel>(data, start, cfg)
                                  : run_lm<AtsModel>(data, start, cfg);
}

std::vector<std::vector<double>> initial_guesses(ModelKind kind, const Spectrum& data, int n,
                                                 std::uint64_t seed)
{
    if (n < 1) throw DomainError("initial_guesses: n must be >= 1");
    check_data(kind, data);

    const auto base = first_guess(kind, data);
    const double step = (data.deltas.back() - data.deltas.front()) /
                        static_cast<double>(data.size() - 1);
    const CounterRng rng(seed, kind == ModelKind::Eit ? 0xE17 : 0xA75);
    const double log_span = std::log(16.0);

    std::vector<std::vector<double>> guesses{base};
    for (int i = 1; i < n; ++i) {
        auto g = base;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double u = rng.uniform(static_cast<std::uint64_t>(i) * g.size() + k);
            const double scale = g[k] != 0.0 ? g[k] : step;
            g[k] = scale * 0.25 * std::exp(u * log_span);
        }
        guesses.push_back(std::move(g));
    }
    return guesses;
}

FitResult fit(ModelKind kind, const Spectrum& data, const FitConfig& cfg, Execution exec)
{
    cfg.validate();
    check_data(kind, data);

    const auto guesses = initial_guesses(kind, data, cfg.n_starts, cfg.seed);
    std::vector<LmRun> runs(guesses.size());
    const auto solve = [&](std::size_t i) {
        runs[i] = kind == ModelKind::Eit ? run_lm<EitModel>(data, guesses[i], cfg)
                                         : run_lm<AtsModel>(data, guesses[i], cfg);
    };

    const auto n = static_cast<std::ptrdiff_t>(guesses.size());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) solve(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) solve(static_cast<std::size_t>(i));
    }

    // Accepted LM steps only lower the SSR, so a start stopped by the iteration
    // cap still holds a valid (if not final) SSR. It may win: where the
    // infimum is only approached asymptotically, e.g. at the exceptional point,
    // the best starts never meet the convergence test.
    int best = -1;
    bool any_converged = false;
    for (int i = 0; i < static_cast<int>(runs.size()); ++i) {
        const auto& r = runs[static_cast<std::size_t>(i)];
        if (!std::isfinite(r.ssr)) continue;
        any_converged = any_converged || r.converged;
        if (best < 0 || r.ssr < runs[static_cast<std::size_t>(best)].ssr) best = i;
    }
    if (best < 0 || !any_converged)
        throw FitError(FitError::Reason::NoConvergence,
                       "fit: no " + std::string(to_string(kind)) + " start converged in " +
                           std::to_string(cfg.max_iterations) + " iterations");

    const auto& winner = runs[static_cast<std::size_t>(best)];
    FitResult result;
    result.params = canonicalize(from_vector(kind, winner.params));
    result.ssr = winner.ssr;
    result.n_points = static_cast<int>(data.size());
    result.sigma_hat_sq = winner.ssr / static_cast<double>(data.size());
    result.converged = winner.converged;
    result.best_start = best;
    result.iterations = winner.iterations;
    const double agree = winner.ssr * (1.0 + 1e-6) + std::numeric_limits<double>::min();
    for (const auto& r : runs)
        if (r.ssr <= agree) ++result.n_starts_agreeing;
    return result;
}

} // namespace eitats
