#pragma once

#include <functional>
#include <vector>

namespace ising {

// Deterministic drift evaluation: dx = f(x, t). Noise, where a solver has
// any, is injected after the accepted step, not inside the derivative.
using Derivative =
    std::function<void(const std::vector<double>& x, double t, std::vector<double>& dx)>;

struct StepOutcome {
    std::vector<double> new_state;
    double dt_used = 0.0;
    double dt_next = 0.0;
    bool accepted = false;
    double error_estimate = 0.0;
};

std::vector<double> euler_step(const Derivative& f, const std::vector<double>& x,
                               double t, double dt);

/// Position updated first, momentum updated with the new position.
void symplectic_euler_step(const Derivative& fx, const Derivative& fy,
                           std::vector<double>& x, std::vector<double>& y,
                           double t, double dt);

std::vector<double> rk4_step(const Derivative& f, const std::vector<double>& x,
                             double t, double dt);

/// One Fehlberg 4(5) attempt. Accepts when the max-norm embedded error
/// estimate is <= eps; dt_next = 0.9 dt (eps/err)^{1/5} clamped to
/// [dt/4, 4 dt]. Rejected attempts leave the state unchanged.
StepOutcome rk45_step(const Derivative& f, const std::vector<double>& x,
                      double t, double dt, double eps);

/// Retries rk45_step until acceptance. Throws when dt underflows 1e-12.
StepOutcome rk45_advance(const Derivative& f, const std::vector<double>& x,
                         double t, double dt, double eps);

}  // namespace ising
