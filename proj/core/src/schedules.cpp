#include "ising/schedules.hpp"

#include <cmath>
#include <stdexcept>

namespace ising {

ScheduleSpec ScheduleSpec::constant(double v) {
    ScheduleSpec s;
    s.kind = ScheduleKind::Constant;
    s.value = v;
    return s;
}

ScheduleSpec ScheduleSpec::tanh_ramp(double a0, double a1, int nt) {
    ScheduleSpec s;
    s.kind = ScheduleKind::TanhRamp;
    s.amplitude = a0;
    s.sharpness = a1;
    s.total_steps = nt;
    return s;
}

ScheduleSpec ScheduleSpec::linear(double final, int nt) {
    ScheduleSpec s;
    s.kind = ScheduleKind::Linear;
    s.final_value = final;
    s.total_steps = nt;
    return s;
}

ScheduleSpec ScheduleSpec::inverse_linear_beta(double beta_f, int nt) {
    ScheduleSpec s;
    s.kind = ScheduleKind::InverseLinearBeta;
    s.final_value = beta_f;
    s.total_steps = nt;
    return s;
}

ScheduleSpec ScheduleSpec::geometric(double zeta0, double decay, int nt) {
    ScheduleSpec s;
    s.kind = ScheduleKind::Geometric;
    s.amplitude = zeta0;
    s.decay = decay;
    s.total_steps = nt;
    return s;
}

ScheduleSpec ScheduleSpec::periodic_square(double high, double low, double period, int nt) {
    ScheduleSpec s;
    s.kind = ScheduleKind::PeriodicSquare;
    s.high = high;
    s.low = low;
    s.period = period;
    s.total_steps = nt;
    return s;
}

double eval_schedule(const ScheduleSpec& spec, int t) {
    if (t < 0 || t > spec.total_steps)
        throw std::domain_error("eval_schedule: step index out of [0, N_t]");
    const double frac = static_cast<double>(t) / spec.total_steps;
    switch (spec.kind) {
        case ScheduleKind::Constant:
            return spec.value;
        case ScheduleKind::TanhRamp:
            return spec.amplitude * std::tanh(spec.sharpness * frac);
        case ScheduleKind::Linear:
        case ScheduleKind::InverseLinearBeta:
            return spec.final_value * frac;
        case ScheduleKind::Geometric:
            return spec.amplitude * std::pow(spec.decay, t);
        case ScheduleKind::PeriodicSquare: {
            const double phase = std::fmod(static_cast<double>(t), spec.period);
            return phase < 0.5 * spec.period ? spec.high : spec.low;
        }
    }
    throw std::logic_error("eval_schedule: unknown kind");
}

}  // namespace ising
