#pragma once

namespace ising {

enum class ScheduleKind {
    Constant,
    TanhRamp,          // a0 * tanh(a1 * t / N_t)
    Linear,            // final * t / N_t, through the origin
    InverseLinearBeta, // beta_f * t / N_t (inverse temperature grows linearly)
    Geometric,         // zeta0 * decay^t
    PeriodicSquare,    // high/low alternating each half period, starting high
};

struct ScheduleSpec {
    ScheduleKind kind = ScheduleKind::Constant;
    double value = 0.0;      // constant
    double amplitude = 0.0;  // a0 / zeta0
    double sharpness = 1.0;  // a1
    double final_value = 0.0;
    double decay = 1.0;
    double period = 2.0;     // in steps
    double low = 0.0;
    double high = 1.0;
    int total_steps = 1;     // N_t

    static ScheduleSpec constant(double v);
    static ScheduleSpec tanh_ramp(double a0, double a1, int nt);
    static ScheduleSpec linear(double final, int nt);
    static ScheduleSpec inverse_linear_beta(double beta_f, int nt);
    static ScheduleSpec geometric(double zeta0, double decay, int nt);
    static ScheduleSpec periodic_square(double high, double low, double period, int nt);
};

// Evaluate at integer step index t, 0 <= t <= N_t.
double eval_schedule(const ScheduleSpec& spec, int t);

}  // namespace ising
