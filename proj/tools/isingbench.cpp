// Command-line front end: instance generation, solving, TTS benchmarking,
// scaling fits, and the exhaustive ground-state oracle.
//
// Exit codes: 0 success, 1 usage/config error, 2 I/O error, 3 infeasible.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ising/bench_config.hpp"
#include "ising/instances.hpp"
#include "ising/solvers.hpp"
#include "ising/tts.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInfeasible = 3;

using PlantMode = ising::PlantMode;

std::string indexed_path(const std::string& base, int index, int count) {
    if (count == 1) return base;
    std::filesystem::path p(base);
    const std::string ext = p.extension().string();
    const std::string stem = (p.parent_path() / p.stem()).string();
    return stem + "-" + std::to_string(index) + ext;
}

struct GenOptions {
    std::string out;
    std::uint64_t seed = 0;
    int count = 1;
    // square
    int L = 4;
    std::string mode = "random-verified";
    int loops = 0;
    // vb
    int N = 128;
    int c = 16;
    bool verify = false;
};

int cmd_gen_square(const GenOptions& opt) {
    PlantMode mode;
    if (opt.mode == "mattis") mode = ising::PlantMode::Mattis;
    else if (opt.mode == "frustrated-loops") mode = ising::PlantMode::FrustratedLoops;
    else if (opt.mode == "random-verified") mode = ising::PlantMode::RandomVerified;
    else {
        std::cerr << "unknown mode: " << opt.mode << "\n";
        return kExitUsage;
    }
    for (int k = 0; k < opt.count; ++k) {
        auto problem =
            ising::gen_planted_square({opt.L, opt.seed + static_cast<std::uint64_t>(k),
                                       opt.loops},
                                      mode);
        std::string out = opt.out.empty()
                              ? "square-L" + std::to_string(opt.L) + "-s" +
                                    std::to_string(opt.seed + k) + ".txt"
                              : indexed_path(opt.out, k, opt.count);
        ising::write_instance(problem, out);
        std::cout << out;
        if (problem.ground_energy())
            std::cout << " ground_energy: " << *problem.ground_energy();
        std::cout << "\n";
    }
    return 0;
}

int cmd_gen_vb(const GenOptions& opt) {
    for (int k = 0; k < opt.count; ++k) {
        auto problem = ising::gen_viana_bray(
            {opt.N, opt.c, opt.seed + static_cast<std::uint64_t>(k), opt.verify});
        std::string out = opt.out.empty()
                              ? "vb-N" + std::to_string(opt.N) + "-c" + std::to_string(opt.c) +
                                    "-s" + std::to_string(opt.seed + k) + ".txt"
                              : indexed_path(opt.out, k, opt.count);
        ising::write_instance(problem, out);
        std::cout << out;
        if (problem.ground_energy())
            std::cout << " ground_energy: " << *problem.ground_energy();
        std::cout << "\n";
    }
    return 0;
}

struct SolveOptions {
    std::vector<std::string> files;
    std::string solver = "sa";
    std::string out;
    std::string units = "us";
    std::uint64_t seed = 0;
    int runs = 1;
    int jobs = 1;
    ising::ParamOverrides overrides;
};

int cmd_solve(const SolveOptions& opt) {
    const ising::SolverKind kind = ising::parse_solver(opt.solver);
    const bool include_elapsed = opt.units != "steps";

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!opt.out.empty()) {
        file.open(opt.out);
        if (!file) {
            std::cerr << "cannot open output file: " << opt.out << "\n";
            return kExitIo;
        }
        os = &file;
    }

    for (const auto& path : opt.files) {
        auto problem = ising::read_instance(path);
        problem.add_metadata("instance", path);
        ising::SolverParams params = ising::SolverParams::defaults(kind, problem);
        ising::apply_overrides(params, opt.overrides);

        std::vector<ising::RunRecord> records(opt.runs);
        std::atomic<int> cursor{0};
        auto worker = [&]() {
            for (;;) {
                const int r = cursor.fetch_add(1);
                if (r >= opt.runs) return;
                records[r] = ising::run(problem, params,
                                        opt.seed ^ static_cast<std::uint64_t>(r));
            }
        };
        if (opt.jobs <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < opt.jobs; ++w) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        // output normalized by (instance, run index)
        for (const auto& rec : records) *os << ising::to_json_line(rec, include_elapsed) << "\n";
    }
    return 0;
}

int cmd_bench(const std::string& config_path) {
    ising::BenchConfig cfg = ising::load_bench_config(config_path);
    ising::BenchOutputs out = ising::run_bench(cfg);
    {
        std::ofstream f(cfg.tts_csv_path);
        if (!f) {
            std::cerr << "cannot open " << cfg.tts_csv_path << "\n";
            return kExitIo;
        }
        f << out.tts_csv;
    }
    if (!cfg.fit_csv_path.empty()) {
        std::ofstream f(cfg.fit_csv_path);
        if (!f) {
            std::cerr << "cannot open " << cfg.fit_csv_path << "\n";
            return kExitIo;
        }
        f << out.fit_csv;
    }
    std::cout << "wrote " << cfg.tts_csv_path;
    if (!cfg.fit_csv_path.empty()) std::cout << " and " << cfg.fit_csv_path;
    std::cout << "\n";
    return 0;
}

int cmd_fit(const std::string& csv_path, const std::string& units, const std::string& out) {
    std::ifstream in(csv_path);
    if (!in) {
        std::cerr << "cannot open " << csv_path << "\n";
        return kExitIo;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string fit_csv = ising::fit_from_csv(ss.str(), units == "steps");
    if (out.empty()) {
        std::cout << fit_csv;
    } else {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "cannot open " << out << "\n";
            return kExitIo;
        }
        f << fit_csv;
    }
    return 0;
}

int cmd_oracle(const std::string& path, bool write_back) {
    auto problem = ising::read_instance(path);
    auto [e, config] = ising::brute_force_ground_state(problem);
    std::cout << "ground_energy: " << e << "\nconfig: ";
    for (auto s : config.spins) std::cout << (s > 0 ? '+' : '-');
    std::cout << "\n";
    if (write_back) {
        problem.set_ground_energy(e);
        ising::write_instance(problem, path);
    }
    return 0;
}

void add_param_flags(CLI::App* cmd, ising::ParamOverrides& overrides) {
    static const std::vector<std::string> numeric_keys = {
        "dt",     "sigma",      "beta",    "alpha0",     "alpha1", "alpha-final",
        "x-sat",  "beta-f",     "zeta0",   "zeta-decay", "alpha-max", "period",
        "eps",    "kerr",       "detuning", "init-spread", "epsilon", "rho-th",
        "gain0"};
    for (const auto& key : numeric_keys) {
        std::string canonical = key;
        std::replace(canonical.begin(), canonical.end(), '-', '_');
        cmd->add_option_function<double>(
            "--" + key, [&overrides, canonical](double v) { overrides.numeric[canonical] = v; });
    }
    cmd->add_option_function<int>(
        "--steps", [&overrides](int v) { overrides.numeric["steps"] = v; },
        "iteration / sweep budget N_t");
    cmd->add_option_function<int>(
        "--sweeps", [&overrides](int v) { overrides.numeric["steps"] = v; },
        "alias for --steps");
    cmd->add_option_function<std::string>(
        "--integrator", [&overrides](std::string v) { overrides.strings["integrator"] = v; },
        "euler|symplectic|rk4|rk45");
    cmd->add_flag_function(
        "--noise-outside",
        [&overrides](std::int64_t) { overrides.flags["noise_outside"] = true; },
        "place noise outside the activation (alternate update-map form)");
    cmd->add_flag_function(
        "--final-only",
        [&overrides](std::int64_t) { overrides.flags["track_best"] = false; },
        "judge success on the final state instead of the trajectory best");
    cmd->add_flag_function(
        "--random-sweep-order",
        [&overrides](std::int64_t) { overrides.flags["random_sweep_order"] = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ising solver suite and TTS benchmark harness"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate benchmark instances");
    gen_cmd->require_subcommand(1);
    auto* gen_sq = gen_cmd->add_subcommand("square", "planted periodic square lattice");
    gen_sq->add_option("--L", gen.L, "linear lattice size");
    gen_sq->add_option("--mode", gen.mode, "mattis|frustrated-loops|random-verified");
    gen_sq->add_option("--loops", gen.loops, "frustrated loop count (0 = L*L/2)");
    gen_sq->add_option("--seed", gen.seed);
    gen_sq->add_option("--count", gen.count);
    gen_sq->add_option("--out", gen.out);
    auto* gen_vb = gen_cmd->add_subcommand("vb", "Viana-Bray / SK random regular graph");
    gen_vb->add_option("--N", gen.N, "number of spins");
    gen_vb->add_option("--c", gen.c, "connectivity (N-1 = fully connected SK)");
    gen_vb->add_option("--seed", gen.seed);
    gen_vb->add_option("--count", gen.count);
    gen_vb->add_option("--out", gen.out);
    gen_vb->add_flag("--verify", gen.verify, "oracle-annotate the ground energy (N <= 24)");

    SolveOptions solve;
    auto* solve_cmd = app.add_subcommand("solve", "run a solver, emit JSON-lines records");
    solve_cmd->add_option("files", solve.files, "instance files")->required();
    solve_cmd->add_option("--solver", solve.solver,
                          "sim-cim|oeo-cim|opo-cim|oim|gd|sbm|hopfield|hopfield-discrete|sa");
    solve_cmd->add_option("--runs", solve.runs, "independent restarts");
    solve_cmd->add_option("--seed", solve.seed, "base seed; run r uses seed XOR r");
    solve_cmd->add_option("--jobs", solve.jobs, "parallel restart workers");
    solve_cmd->add_option("--units", solve.units, "us|steps (steps drops elapsed_us)");
    solve_cmd->add_option("--out", solve.out, "output file (default stdout)");
    add_param_flags(solve_cmd, solve.overrides);

    std::string bench_config;
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark config, emit CSV tables");
    bench_cmd->add_option("config", bench_config, "JSON benchmark config")->required();

    std::string fit_csv, fit_units = "us", fit_out;
    auto* fit_cmd = app.add_subcommand("fit", "log-linear scaling fit of a TTS CSV");
    fit_cmd->add_option("csv", fit_csv)->required();
    fit_cmd->add_option("--units", fit_units, "us|steps");
    fit_cmd->add_option("--out", fit_out, "output file (default stdout)");

    std::string oracle_file;
    bool oracle_write = false;
    auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive ground state (N <= 24)");
    oracle_cmd->add_option("file", oracle_file)->required();
    oracle_cmd->add_flag("--write", oracle_write, "annotate the instance file in place");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen_sq->parsed()) return cmd_gen_square(gen);
        if (gen_vb->parsed()) return cmd_gen_vb(gen);
        if (solve_cmd->parsed()) return cmd_solve(solve);
        if (bench_cmd->parsed()) return cmd_bench(bench_config);
        if (fit_cmd->parsed()) return cmd_fit(fit_csv, fit_units, fit_out);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_file, oracle_write);
    } catch (const ising::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ising::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ising::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
