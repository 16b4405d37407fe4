#pragma once

#include <cstdint>
#include <string>

#include "ising/problem.hpp"
#include "ising/schedules.hpp"

namespace ising {

enum class SolverKind {
    SimCim,
    OeoCim,
    OpoCim,
    Oim,
    Gd,
    Sbm,
    Hopfield,          // continuous graded-response network
    HopfieldDiscrete,  // synchronous sign updates
    Sa,
};

enum class IntegratorKind { Euler, Symplectic, Rk4, Rk45 };

const char* solver_name(SolverKind kind);
SolverKind parse_solver(const std::string& name);
const char* integrator_name(IntegratorKind kind);
IntegratorKind parse_integrator(const std::string& name);

struct SolverParams {
    SolverKind kind = SolverKind::Sa;
    int num_steps = 1000;  // iterations / sweeps
    double dt = 1.0;
    IntegratorKind integrator = IntegratorKind::Euler;

    ScheduleSpec pump;         // alpha(t)
    ScheduleSpec coupling;     // beta(t)
    ScheduleSpec noise;        // sigma_g(t), Gaussian width per spin per step
    ScheduleSpec activation;   // zeta(t) for the tanh steepness
    ScheduleSpec temperature;  // beta(t) for SA (inverse temperature)

    double x_sat = 3.0;      // Sim-CIM hard wall
    double kerr = 1.0;       // SBM K
    double detuning = 1.0;   // SBM Delta
    double rk45_eps = 1.0;   // RK45 error tolerance
    double init_spread = 0.1;

    // gain-dissipative rates; defaults() derives them from the problem as
    // eps = 0.005 R, rho_th = 0.15 R, gain0 = -R with R = max_l sum_m |J_lm|
    double gd_epsilon = 0.005;
    double gd_rho_th = 0.15;
    double gd_gain0 = -1.0;

    // flags (see solver notes): noise placement per the update-map form
    // by default, outside the activation when set
    bool noise_outside = false;
    bool track_best = true;   // judge success on trajectory best, not final
    bool random_sweep_order = false;  // SA

    /// Defaults follow the small-lattice operating points of each solver;
    /// size-dependent values (GD rates, SBM coupling) come from the problem.
    static SolverParams defaults(SolverKind kind, const IsingProblem& problem);
};

struct RunRecord {
    std::string solver;
    std::string instance;
    std::uint64_t seed = 0;
    double final_energy = 0.0;
    double best_energy = 0.0;
    long steps = 0;
    long elapsed_us = 0;
    bool success = false;
    bool diverged = false;
    SpinConfig final_config;          // not serialized
    std::vector<double> final_state;  // analog state at the last step; empty
                                      // for the discrete solvers
};

RunRecord run(const IsingProblem& problem, const SolverParams& params, std::uint64_t seed);

// JSON-lines serialization; elapsed_us is dropped in steps-units mode so
// repeated runs are byte-identical.
std::string to_json_line(const RunRecord& record, bool include_elapsed = true);

}  // namespace ising
