#include "gpebo/ode.hpp"

#include "gpebo/errors.hpp"

#include <cmath>

namespace gpebo {

namespace {

void check_finite(const std::vector<double>& v, double t) {
    for (double x : v)
        if (!std::isfinite(x))
            throw divergence_error("non-finite derivative", t);
}

} // namespace

std::vector<double> rk4_step(const OdeSystem& sys, double t, const std::vector<double>& state,
                             double dt) {
    const std::size_t n = sys.dimension;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    sys.rhs(t, state.data(), k1.data());
    check_finite(k1, t);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
    sys.rhs(t + 0.5 * dt, tmp.data(), k2.data());
    check_finite(k2, t + 0.5 * dt);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
    sys.rhs(t + 0.5 * dt, tmp.data(), k3.data());
    check_finite(k3, t + 0.5 * dt);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + dt * k3[i];
    sys.rhs(t + dt, tmp.data(), k4.data());
    check_finite(k4, t + dt);
    std::vector<double> out(n);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        out[i] = state[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

} // namespace gpebo
