#include "ising/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ising/integrators.hpp"

namespace ising {
namespace {

constexpr double kPi = std::numbers::pi;

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Trajectory-best bookkeeping. Success is judged on the best readout seen
// along the run unless track_best is off.
struct Tracker {
    const IsingProblem& problem;
    double best = std::numeric_limits<double>::infinity();
    SpinConfig best_config;

    explicit Tracker(const IsingProblem& p) : problem(p) {}
    double observe(const SpinConfig& config) {
        double e = energy(problem, config);
        if (e < best) {
            best = e;
            best_config = config;
        }
        return e;
    }
};

struct Noise {
    std::mt19937_64& rng;
    std::normal_distribution<double> gauss{0.0, 1.0};

    void add(std::vector<double>& x, double sigma, std::size_t count) {
        if (sigma <= 0.0) return;
        for (std::size_t k = 0; k < count; ++k) x[k] += sigma * gauss(rng);
    }
    void add(std::vector<double>& x, double sigma) { add(x, sigma, x.size()); }
};

double wrap_phase(double x) {
    double r = std::remainder(x, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

struct TrajectoryResult {
    SpinConfig final_config;
    double final_energy = 0.0;
    long steps = 0;
    bool diverged = false;
    std::vector<double> state;
};

// Advances a first-order ODE system one outer iteration with the requested
// integrator. RK45 carries its adaptive dt between iterations.
struct OdeStepper {
    IntegratorKind kind;
    double dt;
    double eps;
    double time = 0.0;

    std::vector<double> advance(const Derivative& f, const std::vector<double>& x) {
        switch (kind) {
            case IntegratorKind::Euler: {
                auto out = euler_step(f, x, time, dt);
                time += dt;
                return out;
            }
            case IntegratorKind::Rk4: {
                auto out = rk4_step(f, x, time, dt);
                time += dt;
                return out;
            }
            case IntegratorKind::Rk45: {
                auto out = rk45_advance(f, x, time, dt, eps);
                time += out.dt_used;
                dt = out.dt_next;
                return std::move(out.new_state);
            }
            case IntegratorKind::Symplectic:
                break;
        }
        throw std::invalid_argument("this solver cannot use a symplectic integrator");
    }
};

TrajectoryResult run_sim_cim(const IsingProblem& problem, const SolverParams& p,
                             std::mt19937_64& rng, Tracker& tracker) {
    const int n = problem.size();
    std::vector<double> x(n, 0.0), f(n);
    Noise noise{rng};
    noise.add(x, eval_schedule(p.noise, 0));

    TrajectoryResult res;
    for (int t = 1; t <= p.num_steps; ++t) {
        const double alpha = eval_schedule(p.pump, t);
        const double beta = eval_schedule(p.coupling, t);
        const double sigma = eval_schedule(p.noise, t);
        problem.field(x, f);
        for (int l = 0; l < n; ++l) {
            double next = x[l] + alpha * x[l] + beta * f[l];
            if (!p.noise_outside && sigma > 0.0) next += sigma * noise.gauss(rng);
            next = std::clamp(next, -p.x_sat, p.x_sat);
            if (p.noise_outside && sigma > 0.0) next += sigma * noise.gauss(rng);
            x[l] = next;
        }
        res.steps = t;
        if (!all_finite(x)) {
            res.diverged = true;
            break;
        }
        res.final_config = readout(x, ReadoutKind::Sign);
        res.final_energy = tracker.observe(res.final_config);
    }
    res.state = x;
    return res;
}

TrajectoryResult run_oeo_cim(const IsingProblem& problem, const SolverParams& p,
                             std::mt19937_64& rng, Tracker& tracker) {
    const int n = problem.size();
    std::vector<double> x(n, 0.0), f(n);
    Noise noise{rng};
    noise.add(x, eval_schedule(p.noise, 0));

    TrajectoryResult res;
    for (int t = 1; t <= p.num_steps; ++t) {
        const double alpha = eval_schedule(p.pump, t);
        const double beta = eval_schedule(p.coupling, t);
        const double sigma = eval_schedule(p.noise, t);
        problem.field(x, f);
        for (int l = 0; l < n; ++l) {
            double arg = alpha * x[l] + beta * f[l] - kPi / 4.0;
            if (!p.noise_outside && sigma > 0.0) arg += sigma * noise.gauss(rng);
            double c = std::cos(arg);
            double next = c * c - 0.5;
            if (p.noise_outside && sigma > 0.0) next += sigma * noise.gauss(rng);
            x[l] = next;
        }
        res.steps = t;
        if (!all_finite(x)) {
            res.diverged = true;
            break;
        }
        res.final_config = readout(x, ReadoutKind::Sign);
        res.final_energy = tracker.observe(res.final_config);
    }
    res.state = x;
    return res;
}

TrajectoryResult run_opo_cim(const IsingProblem& problem, const SolverParams& p,
                             std::mt19937_64& rng, Tracker& tracker) {
    const int n = problem.size();
    std::vector<double> x(n, 0.0);
    Noise noise{rng};
    noise.add(x, eval_schedule(p.noise, 0));
    OdeStepper stepper{p.integrator, p.dt, p.rk45_eps};

    TrajectoryResult res;
    for (int t = 1; t <= p.num_steps; ++t) {
        const double alpha = eval_schedule(p.pump, t);
        const double beta = eval_schedule(p.coupling, t);
        Derivative drift = [&](const std::vector<double>& s, double, std::vector<double>& dx) {
            problem.field(s, dx);
            for (int l = 0; l < n; ++l)
                dx[l] = alpha * s[l] - (2.0 / 3.0) * s[l] * s[l] * s[l] + beta * dx[l];
        };
        res.steps = t;
        try {
            x = stepper.advance(drift, x);
        } catch (const std::runtime_error&) {
            res.diverged = true;
            break;
        }
        noise.add(x, eval_schedule(p.noise, t));
        if (!all_finite(x)) {
            res.diverged = true;
            break;
        }
        res.final_config = readout(x, ReadoutKind::Sign);
        res.final_energy = tracker.observe(res.final_config);
    }
    res.state = x;
    return res;
}

TrajectoryResult run_oim(const IsingProblem& problem, const SolverParams& p,
                         std::mt19937_64& rng, Tracker& tracker) {
    const int n = problem.size();
    std::vector<double> x(n), sin_x(n), cos_x(n), fs(n), fc(n);
    std::uniform_real_distribution<double> uni(-kPi, kPi);
    for (auto& v : x) v = uni(rng);
    Noise noise{rng};
    OdeStepper stepper{p.integrator, p.dt, p.rk45_eps};

    TrajectoryResult res;
    for (int t = 1; t <= p.num_steps; ++t) {
        const double alpha = eval_schedule(p.pump, t);
        const double beta = eval_schedule(p.coupling, t);
        Derivative drift = [&](const std::vector<double>& s, double, std::vector<double>& dx) {
            // sum_m J sin(x_l - x_m) = sin(x_l) sum J cos(x_m) - cos(x_l) sum J sin(x_m)
            for (int l = 0; l < n; ++l) {
                sin_x[l] = std::sin(s[l]);
                cos_x[l] = std::cos(s[l]);
            }
            problem.field(sin_x, fs);
            problem.field(cos_x, fc);
            for (int l = 0; l < n; ++l)
                dx[l] = -alpha * std::sin(2.0 * s[l]) -
                        beta * (sin_x[l] * fc[l] - cos_x[l] * fs[l]);
        };
        res.steps = t;
        try {
            x = stepper.advance(drift, x);
        } catch (const std::runtime_error&) {
            res.diverged = true;
            break;
        }
        noise.add(x, eval_schedule(p.noise, t));
        for (auto& v : x) v = wrap_phase(v);
        if (!all_finite(x)) {
            res.diverged = true;
            break;
        }
        res.final_config = readout(x, ReadoutKind::Phase);
        res.final_energy = tracker.observe(res.final_config);
    }
    res.state = x;
    return res;
}

TrajectoryResult run_gd(const IsingProblem& problem, const SolverParams& p,
                        std::mt19937_64& rng, Tracker& tracker) {
    const int n = problem.size();
    // packed state: [Re psi, Im psi, net gain]
    std::vector<double> state(3 * n, 0.0);
    for (int l = 0; l < n; ++l) {
        state[l] = 1.0;
        state[2 * n + l] = p.gd_gain0;
    }
    std::vector<double> fre(n), fim(n);
    Noise noise{rng};
    OdeStepper stepper{p.integrator, p.dt, p.rk45_eps};

    TrajectoryResult res;
    for (int t = 1; t <= p.num_steps; ++t) {
        const double h2 = eval_schedule(p.pump, t);
        const double beta = eval_schedule(p.coupling, t);
        Derivative drift = [&](const std::vector<double>& s, double, std::vector<double>& dx) {
            problem.field({s.data(), static_cast<std::size_t>(n)}, fre);
            problem.field({s.data() + n, static_cast<std::size_t>(n)}, fim);
            for (int l = 0; l < n; ++l) {
                const double re = s[l], im = s[n + l], gain = s[2 * n + l];
                const double rho = re * re + im * im;
                dx[l] = re * (gain - rho) + beta * fre[l] + h2 * re;
                dx[n + l] = im * (gain - rho) + beta * fim[l] - h2 * im;
                dx[2 * n + l] = p.gd_epsilon * (p.gd_rho_th - rho);
            }
        };
        res.steps = t;
        try {
            state = stepper.advance(drift, state);
        } catch (const std::runtime_error&) {
            res.diverged = true;
            break;
        }
        // complex noise: independent real and imaginary parts
        noise.add(state, eval_schedule(p.noise, t), 2 * static_cast<std::size_t>(n));
        if (!all_finite(state)) {
            res.diverged = true;
            break;
        }
        res.final_config = readout({state.data(), 2 * static_cast<std::size_t>(n)},
                                   ReadoutKind::RealPart);
        res.final_energy = tracker.observe(res.final_config);
    }
    res.state = state;
    return res;
}

TrajectoryResult run_sbm(const IsingProblem& problem, const SolverParams& p,
                         std::mt19937_64& rng, Tracker& tracker) {
    const int n = problem.size();
    std::vector<double> x(n), y(n);
    std::uniform_real_distribution<double> uni(-p.init_spread, p.init_spread);
    for (auto& v : x) v = uni(rng);
    for (auto& v : y) v = uni(rng);

    TrajectoryResult res;
    double time = 0.0;
    for (int t = 1; t <= p.num_steps; ++t) {
        const double alpha = eval_schedule(p.pump, t);
        const double beta = eval_schedule(p.coupling, t);
        Derivative fx = [&](const std::vector<double>& mom, double, std::vector<double>& dx) {
            for (int l = 0; l < n; ++l) dx[l] = p.detuning * mom[l];
        };
        Derivative fy = [&](const std::vector<double>& pos, double, std::vector<double>& dy) {
            problem.field(pos, dy);
            for (int l = 0; l < n; ++l)
                dy[l] = -(p.kerr * pos[l] * pos[l] - alpha + p.detuning) * pos[l] +
                        beta * dy[l];
        };
        res.steps = t;
        try {
            if (p.integrator == IntegratorKind::Symplectic) {
                symplectic_euler_step(fx, fy, x, y, time, p.dt);
            } else if (p.integrator == IntegratorKind::Euler) {
                std::vector<double> dx(n), dy(n);
                fx(y, time, dx);
                fy(x, time, dy);
                for (int l = 0; l < n; ++l) {
                    x[l] += p.dt * dx[l];
                    y[l] += p.dt * dy[l];
                }
            } else {
                throw std::invalid_argument("sbm: integrator must be symplectic or euler");
            }
        } catch (const std::runtime_error&) {
            res.diverged = true;
            break;
        }
        time += p.dt;
        if (!all_finite(x) || !all_finite(y)) {
            res.diverged = true;
            break;
        }
        res.final_config = readout(x, ReadoutKind::Sign);
        res.final_energy = tracker.observe(res.final_config);
    }
    res.state = x;
    res.state.insert(res.state.end(), y.begin(), y.end());
    return res;
}

TrajectoryResult run_hopfield(const IsingProblem& problem, const SolverParams& p,
                              std::mt19937_64& rng, Tracker& tracker) {
    const int n = problem.size();
    std::vector<double> x(n, 0.0), phi(n);
    Noise noise{rng};
    noise.add(x, eval_schedule(p.noise, 0));
    OdeStepper stepper{p.integrator, p.dt, p.rk45_eps};

    TrajectoryResult res;
    for (int t = 1; t <= p.num_steps; ++t) {
        const double alpha = eval_schedule(p.pump, t);
        const double beta = eval_schedule(p.coupling, t);
        const double zeta = eval_schedule(p.activation, t);
        Derivative drift = [&](const std::vector<double>& s, double, std::vector<double>& dx) {
            for (int l = 0; l < n; ++l) phi[l] = std::tanh(s[l] / zeta);
            problem.field(phi, dx);
            for (int l = 0; l < n; ++l) dx[l] = -alpha * s[l] + beta * dx[l];
        };
        res.steps = t;
        try {
            x = stepper.advance(drift, x);
        } catch (const std::runtime_error&) {
            res.diverged = true;
            break;
        }
        noise.add(x, eval_schedule(p.noise, t));
        if (!all_finite(x)) {
            res.diverged = true;
            break;
        }
        res.final_config = readout(x, ReadoutKind::Sign);
        res.final_energy = tracker.observe(res.final_config);
    }
    res.state = x;
    return res;
}

TrajectoryResult run_hopfield_discrete(const IsingProblem& problem, const SolverParams& p,
                                       std::mt19937_64& rng, Tracker& tracker) {
    const int n = problem.size();
    SpinConfig state;
    state.spins.resize(n);
    for (auto& s : state.spins) s = (rng() & 1) ? int8_t{1} : int8_t{-1};

    TrajectoryResult res;
    res.final_config = state;
    res.final_energy = tracker.observe(state);
    for (int t = 1; t <= p.num_steps; ++t) {
        SpinConfig next;
        next.spins.resize(n);
        for (int l = 0; l < n; ++l)
            next.spins[l] = problem.local_field(l, state) < 0.0 ? -1 : 1;
        res.steps = t;
        const bool fixed_point = next == state;
        state = std::move(next);
        res.final_config = state;
        res.final_energy = tracker.observe(state);
        if (fixed_point) break;
    }
    return res;
}

TrajectoryResult run_sa(const IsingProblem& problem, const SolverParams& p,
                        std::mt19937_64& rng, Tracker& tracker) {
    const int n = problem.size();
    SpinConfig state;
    state.spins.resize(n);
    for (auto& s : state.spins) s = (rng() & 1) ? int8_t{1} : int8_t{-1};
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<int> order(n);
    for (int l = 0; l < n; ++l) order[l] = l;

    TrajectoryResult res;
    double e = energy(problem, state);
    double best = tracker.observe(state);
    for (int t = 1; t <= p.num_steps; ++t) {
        const double beta_t = eval_schedule(p.temperature, t);
        if (p.random_sweep_order) std::shuffle(order.begin(), order.end(), rng);
        for (int l : order) {
            const double delta = 2.0 * state.spins[l] * problem.local_field(l, state);
            if (delta <= 0.0 || uni(rng) < std::exp(-beta_t * delta)) {
                state.spins[l] = static_cast<int8_t>(-state.spins[l]);
                e += delta;
            }
        }
        res.steps = t;
        if (e < best) {
            best = tracker.observe(state);
        }
    }
    res.final_config = state;
    res.final_energy = energy(problem, state);
    tracker.observe(state);
    return res;
}

}  // namespace

const char* solver_name(SolverKind kind) {
    switch (kind) {
        case SolverKind::SimCim: return "sim-cim";
        case SolverKind::OeoCim: return "oeo-cim";
        case SolverKind::OpoCim: return "opo-cim";
        case SolverKind::Oim: return "oim";
        case SolverKind::Gd: return "gd";
        case SolverKind::Sbm: return "sbm";
        case SolverKind::Hopfield: return "hopfield";
        case SolverKind::HopfieldDiscrete: return "hopfield-discrete";
        case SolverKind::Sa: return "sa";
    }
    return "?";
}

SolverKind parse_solver(const std::string& name) {
    for (SolverKind k :
         {SolverKind::SimCim, SolverKind::OeoCim, SolverKind::OpoCim, SolverKind::Oim,
          SolverKind::Gd, SolverKind::Sbm, SolverKind::Hopfield,
          SolverKind::HopfieldDiscrete, SolverKind::Sa})
        if (name == solver_name(k)) return k;
    throw std::invalid_argument("unknown solver: " + name);
}

const char* integrator_name(IntegratorKind kind) {
    switch (kind) {
        case IntegratorKind::Euler: return "euler";
        case IntegratorKind::Symplectic: return "symplectic";
        case IntegratorKind::Rk4: return "rk4";
        case IntegratorKind::Rk45: return "rk45";
    }
    return "?";
}

IntegratorKind parse_integrator(const std::string& name) {
    for (IntegratorKind k : {IntegratorKind::Euler, IntegratorKind::Symplectic,
                             IntegratorKind::Rk4, IntegratorKind::Rk45})
        if (name == integrator_name(k)) return k;
    throw std::invalid_argument("unknown integrator: " + name);
}

SolverParams SolverParams::defaults(SolverKind kind, const IsingProblem& problem) {
    SolverParams p;
    p.kind = kind;
    const double row = std::max(problem.max_row_abs_sum(), 1e-12);
    switch (kind) {
        case SolverKind::SimCim:
            p.num_steps = 1000;
            p.pump = ScheduleSpec::tanh_ramp(0.7, 1.0, p.num_steps);
            p.coupling = ScheduleSpec::constant(0.2);
            p.noise = ScheduleSpec::constant(0.1);
            p.x_sat = 3.0;
            break;
        case SolverKind::OeoCim:
            p.num_steps = 64;
            p.pump = ScheduleSpec::tanh_ramp(0.45, 2.0, p.num_steps);
            p.coupling = ScheduleSpec::constant(0.29);
            p.noise = ScheduleSpec::constant(0.1);
            break;
        case SolverKind::OpoCim:
            p.num_steps = 1000;
            p.dt = 0.05;
            p.pump = ScheduleSpec::tanh_ramp(1.0, 2.0, p.num_steps);
            p.coupling = ScheduleSpec::constant(0.2);
            p.noise = ScheduleSpec::constant(0.1);
            break;
        case SolverKind::Oim:
            p.num_steps = 1000;
            p.dt = 0.02;
            p.pump = ScheduleSpec::periodic_square(1.0, 0.0, 200.0, p.num_steps);
            p.coupling = ScheduleSpec::constant(1.0);
            p.noise = ScheduleSpec::constant(0.1);
            break;
        case SolverKind::Gd:
            p.num_steps = 64;
            p.dt = 0.5 / std::max(1.0, row / 2.0);
            p.pump = ScheduleSpec::tanh_ramp(0.5, 10.0, p.num_steps);  // h_2 profile
            p.coupling = ScheduleSpec::constant(1.0);
            p.noise = ScheduleSpec::constant(0.2);
            p.gd_epsilon = 0.005 * row;
            p.gd_rho_th = 0.15 * row;
            p.gd_gain0 = -row;
            break;
        case SolverKind::Sbm: {
            p.num_steps = 32;
            p.dt = 0.5;
            p.integrator = IntegratorKind::Symplectic;
            p.pump = ScheduleSpec::linear(1.0, p.num_steps);
            const double sigma_j = std::max(problem.coupling_stddev(), 1e-12);
            p.coupling = ScheduleSpec::constant(
                0.7 / (sigma_j * std::sqrt(static_cast<double>(std::max(problem.size(), 1)))));
            p.noise = ScheduleSpec::constant(0.0);
            break;
        }
        case SolverKind::Hopfield:
            p.num_steps = 32;
            p.dt = 0.5;
            p.pump = ScheduleSpec::constant(1.0);
            p.coupling = ScheduleSpec::constant(1.0);
            p.activation = ScheduleSpec::geometric(10.0, 0.8, p.num_steps);
            p.noise = ScheduleSpec::constant(0.1);
            break;
        case SolverKind::HopfieldDiscrete:
            p.num_steps = 100;
            p.noise = ScheduleSpec::constant(0.0);
            break;
        case SolverKind::Sa:
            p.num_steps = 1000;
            p.temperature = ScheduleSpec::inverse_linear_beta(3.0, p.num_steps);
            p.noise = ScheduleSpec::constant(0.0);
            break;
    }
    for (ScheduleSpec* s : {&p.pump, &p.coupling, &p.noise, &p.activation, &p.temperature})
        s->total_steps = p.num_steps;
    return p;
}

RunRecord run(const IsingProblem& problem, const SolverParams& params, std::uint64_t seed) {
    if (params.num_steps < 1) throw std::invalid_argument("run: N_t must be >= 1");
    std::mt19937_64 rng(seed);
    Tracker tracker(problem);

    const auto start = std::chrono::steady_clock::now();
    TrajectoryResult traj;
    switch (params.kind) {
        case SolverKind::SimCim: traj = run_sim_cim(problem, params, rng, tracker); break;
        case SolverKind::OeoCim: traj = run_oeo_cim(problem, params, rng, tracker); break;
        case SolverKind::OpoCim: traj = run_opo_cim(problem, params, rng, tracker); break;
        case SolverKind::Oim: traj = run_oim(problem, params, rng, tracker); break;
        case SolverKind::Gd: traj = run_gd(problem, params, rng, tracker); break;
        case SolverKind::Sbm: traj = run_sbm(problem, params, rng, tracker); break;
        case SolverKind::Hopfield: traj = run_hopfield(problem, params, rng, tracker); break;
        case SolverKind::HopfieldDiscrete:
            traj = run_hopfield_discrete(problem, params, rng, tracker);
            break;
        case SolverKind::Sa: traj = run_sa(problem, params, rng, tracker); break;
    }
    const auto stop = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.solver = solver_name(params.kind);
    rec.instance = problem.metadata_value("instance");
    if (rec.instance.empty()) {
        rec.instance = problem.metadata_value("generator");
        const std::string s = problem.metadata_value("seed");
        if (!s.empty()) rec.instance += "-s" + s;
    }
    rec.seed = seed;
    rec.steps = traj.steps;
    rec.elapsed_us =
        std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count();
    rec.diverged = traj.diverged;
    rec.final_state = std::move(traj.state);
    if (traj.final_config.size() == 0) {
        // diverged before the first readout
        rec.final_energy = std::numeric_limits<double>::infinity();
        rec.best_energy = rec.final_energy;
    } else {
        rec.final_config = traj.final_config;
        rec.final_energy = traj.final_energy;
        rec.best_energy = params.track_best ? tracker.best : traj.final_energy;
    }
    if (problem.ground_energy() && !traj.diverged) {
        rec.success =
            rec.best_energy <= *problem.ground_energy() + problem.energy_tolerance();
    }
    return rec;
}

std::string to_json_line(const RunRecord& r, bool include_elapsed) {
    char num[64];
    std::string out = "{\"solver\":\"" + r.solver + "\",\"instance\":\"" + r.instance +
                      "\",\"seed\":" + std::to_string(r.seed);
    std::snprintf(num, sizeof(num), "%.17g", r.final_energy);
    out += std::string(",\"final_energy\":") + num;
    std::snprintf(num, sizeof(num), "%.17g", r.best_energy);
    out += std::string(",\"best_energy\":") + num;
    out += ",\"steps\":" + std::to_string(r.steps);
    if (include_elapsed) out += ",\"elapsed_us\":" + std::to_string(r.elapsed_us);
    out += std::string(",\"success\":") + (r.success ? "true" : "false") + "}";
    return out;
}

}  // namespace ising
