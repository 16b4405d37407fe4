#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ising/solvers.hpp"
#include "ising/tts.hpp"

namespace ising {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Named solver-parameter overrides applied on top of per-problem defaults.
// Keys mirror the CLI flags (steps, dt, sigma, beta, alpha0, ...).
struct ParamOverrides {
    std::map<std::string, double> numeric;
    std::map<std::string, bool> flags;
    std::map<std::string, std::string> strings;  // e.g. integrator

    bool empty() const { return numeric.empty() && flags.empty() && strings.empty(); }
    std::string key() const;  // canonical "k=v;k=v" label, "default" when empty
};

void apply_overrides(SolverParams& params, const ParamOverrides& overrides);

struct GeneratorSpec {
    std::string type;  // "square" | "vb"
    int L = 4;
    std::string mode = "random-verified";
    int loops = 0;
    int n = 0;
    int c = 0;
    int count = 1;
    std::uint64_t seed = 0;
    bool verify = false;
};

std::vector<IsingProblem> generate_instances(const GeneratorSpec& spec);

struct InstanceSet {
    std::string name;
    double size_label = 0.0;  // the L column of the TTS CSV
    std::vector<std::string> files;
    std::optional<GeneratorSpec> generator;
};

struct BenchConfig {
    std::vector<SolverKind> solvers;
    int runs = 100;
    double p_d = 0.99;
    std::uint64_t seed = 0;
    int jobs = 1;
    bool steps_units = false;
    std::string tts_csv_path;
    std::string fit_csv_path;  // optional
    ParamOverrides base;
    std::vector<ParamOverrides> grid;  // empty means single default point
    std::vector<InstanceSet> sets;
};

/// Strict parse: unknown keys anywhere raise ConfigError naming the key.
BenchConfig parse_bench_config(const std::string& json_text);
BenchConfig load_bench_config(const std::string& path);

struct BenchOutputs {
    std::string tts_csv;
    std::string fit_csv;
};

/// Full pipeline: load/generate instances, sweep each solver over each
/// instance set, pick the optimal grid point per set, and emit the TTS
/// table plus (when at least two sets are finite) per-solver scaling fits.
BenchOutputs run_bench(const BenchConfig& config);

/// Parse a TTS CSV (as emitted by run_bench) and fit each solver's scaling,
/// returning the fit CSV. Chooses tts_steps when steps_units is set.
std::string fit_from_csv(const std::string& tts_csv, bool steps_units);

// file helpers shared with the CLI
std::vector<std::string> expand_glob(const std::string& pattern);

}  // namespace ising
