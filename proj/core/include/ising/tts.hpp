#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ising/solvers.hpp"

namespace ising {

struct TtsEstimate {
    double p_s = 0.0;
    double n_restarts = 0.0;  // fractional, floored at 1
    double tts_us = 0.0;      // +inf when p_s = 0
    double tts_steps = 0.0;   // machine-independent: n_restarts * mean steps
    double ci_lo = 0.0;       // bootstrap percentile bounds (16th/84th)
    double ci_hi = 0.0;
};

struct BootstrapResult {
    double median = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// log-linear fit TTS = 10^{a + b L}; restricted to the five largest sizes
struct ScalingFit {
    double a = 0.0;
    double b = 0.0;
    double err_a = 0.0;
    double err_b = 0.0;
    std::vector<std::pair<double, double>> points_used;  // (L, log10 tts)
};

/// Fraction of successful records. Warns to stderr below 100 records.
double success_probability(std::span<const RunRecord> records);

/// Expected restarts to hit the optimum at least once with confidence p_d.
double restarts_needed(double p_s, double p_d = 0.99);

TtsEstimate tts(std::span<const RunRecord> records, double p_d = 0.99);

BootstrapResult bootstrap_median(std::span<const double> values, int resamples,
                                 std::uint64_t seed);

ScalingFit fit_scaling(std::span<const std::pair<double, double>> points);

struct SweepRow {
    std::string param_key;
    TtsEstimate estimate;            // median across instances, with CI
    std::vector<TtsEstimate> per_instance;
};

// Grid points may derive size-dependent parameters from each instance.
using ParamsFactory = std::function<SolverParams(const IsingProblem&)>;

/// Runs `runs` restarts of the solver per (instance, grid point), reduces
/// to per-instance TTS, then medians across instances with bootstrap
/// bounds. Restarts fan out over `jobs` threads; reduction order is fixed
/// by (instance, run index), so results do not depend on scheduling.
std::vector<SweepRow> sweep(const std::vector<IsingProblem>& problems,
                            const std::vector<std::pair<std::string, ParamsFactory>>& grid,
                            int runs, double p_d, std::uint64_t seed, int jobs = 1,
                            bool steps_units = false);

std::vector<SweepRow> sweep(const std::vector<IsingProblem>& problems,
                            const std::vector<std::pair<std::string, SolverParams>>& grid,
                            int runs, double p_d, std::uint64_t seed, int jobs = 1,
                            bool steps_units = false);

/// Index of the grid point with minimal median TTS; steps-units ties break
/// on fewer total steps, then on grid order.
std::size_t optimal_grid_point(const std::vector<SweepRow>& rows, bool steps_units);

}  // namespace ising
