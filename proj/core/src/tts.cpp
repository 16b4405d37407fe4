#include "ising/tts.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace ising {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double success_probability(std::span<const RunRecord> records) {
    if (records.empty()) throw std::domain_error("success_probability: empty record list");
    if (records.size() < 100) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true))
            std::fprintf(stderr,
                         "warning: success probability estimated from %zu < 100 runs\n",
                         records.size());
    }
    std::size_t hits = 0;
    for (const auto& r : records) hits += r.success ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

double restarts_needed(double p_s, double p_d) {
    if (p_s < 0.0 || p_s > 1.0) throw std::domain_error("restarts_needed: p_s not in [0,1]");
    if (p_d <= 0.0 || p_d >= 1.0) throw std::domain_error("restarts_needed: p_d not in (0,1)");
    if (p_s >= p_d) return 1.0;
    if (p_s == 0.0) return kInf;
    return std::max(1.0, std::log(1.0 - p_d) / std::log(1.0 - p_s));
}

TtsEstimate tts(std::span<const RunRecord> records, double p_d) {
    TtsEstimate est;
    est.p_s = success_probability(records);
    est.n_restarts = restarts_needed(est.p_s, p_d);
    double mean_us = 0.0, mean_steps = 0.0;
    for (const auto& r : records) {
        mean_us += static_cast<double>(r.elapsed_us);
        mean_steps += static_cast<double>(r.steps);
    }
    mean_us /= static_cast<double>(records.size());
    mean_steps /= static_cast<double>(records.size());
    est.tts_us = est.n_restarts == kInf ? kInf : est.n_restarts * mean_us;
    est.tts_steps = est.n_restarts == kInf ? kInf : est.n_restarts * mean_steps;
    est.ci_lo = est.ci_hi = est.tts_us;
    return est;
}

BootstrapResult bootstrap_median(std::span<const double> values, int resamples,
                                 std::uint64_t seed) {
    if (values.empty()) throw std::domain_error("bootstrap_median: empty value list");
    BootstrapResult out;
    out.median = median_of({values.begin(), values.end()});

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    std::vector<double> medians(resamples);
    std::vector<double> sample(values.size());
    for (int b = 0; b < resamples; ++b) {
        for (auto& s : sample) s = values[pick(rng)];
        medians[b] = median_of(sample);
    }
    std::sort(medians.begin(), medians.end());
    auto pct = [&](double q) {
        auto idx = static_cast<std::size_t>(std::llround(q * (resamples - 1)));
        return medians[idx];
    };
    out.lo = pct(0.16);
    out.hi = pct(0.84);
    return out;
}

ScalingFit fit_scaling(std::span<const std::pair<double, double>> points) {
    std::vector<std::pair<double, double>> finite;
    for (const auto& [size, value] : points) {
        if (std::isfinite(value) && value > 0.0) {
            finite.emplace_back(size, value);
        } else {
            std::fprintf(stderr, "warning: excluding non-finite TTS point at L=%g\n", size);
        }
    }
    if (finite.size() < 2) throw std::runtime_error("fit_scaling: fewer than 2 finite points");

    // keep points at the five largest distinct sizes
    std::vector<double> sizes;
    for (const auto& [size, value] : finite) sizes.push_back(size);
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    const double cutoff = sizes.size() > 5 ? sizes[4] : sizes.back();

    ScalingFit fit;
    for (const auto& [size, value] : finite)
        if (size >= cutoff) fit.points_used.emplace_back(size, std::log10(value));

    const auto n = static_cast<double>(fit.points_used.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : fit.points_used) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : fit.points_used) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) throw std::runtime_error("fit_scaling: degenerate sizes");
    fit.b = sxy / sxx;
    fit.a = my - fit.b * mx;

    double ssr = 0.0;
    for (const auto& [x, y] : fit.points_used) {
        const double r = y - (fit.a + fit.b * x);
        ssr += r * r;
    }
    const double dof = n - 2.0;
    const double s2 = dof > 0.0 ? ssr / dof : 0.0;
    fit.err_b = std::sqrt(s2 / sxx);
    fit.err_a = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    return fit;
}

std::vector<SweepRow> sweep(const std::vector<IsingProblem>& problems,
                            const std::vector<std::pair<std::string, SolverParams>>& grid,
                            int runs, double p_d, std::uint64_t seed, int jobs,
                            bool steps_units) {
    std::vector<std::pair<std::string, ParamsFactory>> factories;
    factories.reserve(grid.size());
    for (const auto& [key, params] : grid)
        factories.emplace_back(key, [params](const IsingProblem&) { return params; });
    return sweep(problems, factories, runs, p_d, seed, jobs, steps_units);
}

std::vector<SweepRow> sweep(const std::vector<IsingProblem>& problems,
                            const std::vector<std::pair<std::string, ParamsFactory>>& grid,
                            int runs, double p_d, std::uint64_t seed, int jobs,
                            bool steps_units) {
    if (grid.empty()) throw std::domain_error("sweep: empty parameter grid");
    if (runs < 1) throw std::domain_error("sweep: runs must be >= 1");
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < problems.size(); ++i)
        if (problems[i].ground_energy()) usable.push_back(i);
    if (usable.empty())
        throw std::domain_error("sweep: no instance with a known ground energy");

    std::vector<SweepRow> rows;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& [key, factory] = grid[g];
        std::vector<SolverParams> params;
        params.reserve(usable.size());
        for (std::size_t inst : usable) params.push_back(factory(problems[inst]));
        // results keyed by (instance, run index) before reduction
        std::vector<RunRecord> records(usable.size() * runs);
        std::atomic<std::size_t> cursor{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t task = cursor.fetch_add(1);
                if (task >= records.size()) return;
                const std::size_t inst = task / runs;
                const std::size_t r = task % runs;
                const std::uint64_t run_seed =
                    mix(seed + mix(g * 1000003 + inst * 1009 + r));
                records[task] = run(problems[usable[inst]], params[inst], run_seed);
            }
        };
        const int workers = std::max(1, jobs);
        if (workers == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }

        SweepRow row;
        row.param_key = key;
        for (std::size_t inst = 0; inst < usable.size(); ++inst) {
            std::span<const RunRecord> slice(records.data() + inst * runs, runs);
            row.per_instance.push_back(tts(slice, p_d));
        }
        auto component = [&](auto member) {
            std::vector<double> v;
            for (const auto& e : row.per_instance) v.push_back(e.*member);
            return v;
        };
        row.estimate.p_s = median_of(component(&TtsEstimate::p_s));
        row.estimate.n_restarts = median_of(component(&TtsEstimate::n_restarts));
        row.estimate.tts_us = median_of(component(&TtsEstimate::tts_us));
        row.estimate.tts_steps = median_of(component(&TtsEstimate::tts_steps));
        auto values = component(steps_units ? &TtsEstimate::tts_steps : &TtsEstimate::tts_us);
        auto boot = bootstrap_median(values, 1000, mix(seed ^ (g + 1)));
        row.estimate.ci_lo = boot.lo;
        row.estimate.ci_hi = boot.hi;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::size_t optimal_grid_point(const std::vector<SweepRow>& rows, bool steps_units) {
    if (rows.empty()) throw std::domain_error("optimal_grid_point: no rows");
    std::size_t best = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double cur = steps_units ? rows[k].estimate.tts_steps : rows[k].estimate.tts_us;
        const double ref =
            steps_units ? rows[best].estimate.tts_steps : rows[best].estimate.tts_us;
        if (cur < ref) {
            best = k;
        } else if (cur == ref &&
                   rows[k].estimate.tts_steps < rows[best].estimate.tts_steps) {
            best = k;  // tie on the metric: fewer total steps, then grid order
        }
    }
    return best;
}

}  // namespace ising
