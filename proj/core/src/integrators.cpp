#include "ising/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ising {
namespace {

void check_finite(const std::vector<double>& v, const char* who) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::runtime_error(std::string(who) + ": non-finite value");
}

}  // namespace

std::vector<double> euler_step(const Derivative& f, const std::vector<double>& x,
                               double t, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("euler_step: dt must be positive");
    std::vector<double> dx(x.size());
    f(x, t, dx);
    check_finite(dx, "euler_step");
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] + dt * dx[k];
    return out;
}

void symplectic_euler_step(const Derivative& fx, const Derivative& fy,
                           std::vector<double>& x, std::vector<double>& y,
                           double t, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("symplectic_euler_step: dt must be positive");
    std::vector<double> d(x.size());
    fx(y, t, d);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += dt * d[k];
    fy(x, t, d);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += dt * d[k];
    check_finite(x, "symplectic_euler_step");
    check_finite(y, "symplectic_euler_step");
}

std::vector<double> rk4_step(const Derivative& f, const std::vector<double>& x,
                             double t, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("rk4_step: dt must be positive");
    const std::size_t n = x.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    f(x, t, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    f(tmp, t + 0.5 * dt, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    f(tmp, t + 0.5 * dt, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    f(tmp, t + dt, k4);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    check_finite(out, "rk4_step");
    return out;
}

StepOutcome rk45_step(const Derivative& f, const std::vector<double>& x,
                      double t, double dt, double eps) {
    if (dt <= 0.0) throw std::invalid_argument("rk45_step: dt must be positive");
    if (eps <= 0.0) throw std::invalid_argument("rk45_step: eps must be positive");
    const std::size_t n = x.size();

    // classical Fehlberg tableau
    static constexpr double a2 = 1.0 / 4.0;
    static constexpr double a3 = 3.0 / 8.0, b31 = 3.0 / 32.0, b32 = 9.0 / 32.0;
    static constexpr double a4 = 12.0 / 13.0, b41 = 1932.0 / 2197.0,
                            b42 = -7200.0 / 2197.0, b43 = 7296.0 / 2197.0;
    static constexpr double b51 = 439.0 / 216.0, b52 = -8.0, b53 = 3680.0 / 513.0,
                            b54 = -845.0 / 4104.0;
    static constexpr double a6 = 1.0 / 2.0, b61 = -8.0 / 27.0, b62 = 2.0,
                            b63 = -3544.0 / 2565.0, b64 = 1859.0 / 4104.0,
                            b65 = -11.0 / 40.0;
    static constexpr double c1 = 25.0 / 216.0, c3 = 1408.0 / 2565.0,
                            c4 = 2197.0 / 4104.0, c5 = -1.0 / 5.0;
    static constexpr double d1 = 16.0 / 135.0, d3 = 6656.0 / 12825.0,
                            d4 = 28561.0 / 56430.0, d5 = -9.0 / 50.0, d6 = 2.0 / 55.0;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), tmp(n);
    f(x, t, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * a2 * k1[i];
    f(tmp, t + a2 * dt, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * (b31 * k1[i] + b32 * k2[i]);
    f(tmp, t + a3 * dt, k3);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = x[i] + dt * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
    f(tmp, t + a4 * dt, k4);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = x[i] + dt * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
    f(tmp, t + dt, k5);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = x[i] + dt * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] + b64 * k4[i] +
                              b65 * k5[i]);
    f(tmp, t + a6 * dt, k6);

    StepOutcome out;
    out.dt_used = dt;
    out.new_state.resize(n);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y4 = x[i] + dt * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c5 * k5[i]);
        const double y5 = x[i] + dt * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                       d6 * k6[i]);
        out.new_state[i] = y5;
        err = std::max(err, std::abs(y5 - y4));
    }
    check_finite(out.new_state, "rk45_step");
    out.error_estimate = err;
    out.accepted = err <= eps;
    if (err == 0.0) {
        out.dt_next = 4.0 * dt;
    } else {
        out.dt_next = std::clamp(0.9 * dt * std::pow(eps / err, 0.2), 0.25 * dt, 4.0 * dt);
    }
    if (!out.accepted) out.new_state = x;
    return out;
}

StepOutcome rk45_advance(const Derivative& f, const std::vector<double>& x,
                         double t, double dt, double eps) {
    for (;;) {
        if (dt < 1e-12) throw std::runtime_error("rk45_advance: step size underflow (stiff)");
        StepOutcome out = rk45_step(f, x, t, dt, eps);
        if (out.accepted) return out;
        dt = out.dt_next;
    }
}

}  // namespace ising
