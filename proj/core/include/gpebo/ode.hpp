#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gpebo {

// Carrier for a flattened coupled ODE: rhs(t, state, out) writes dimension doubles.
struct OdeSystem {
    std::size_t dimension = 0;
    std::function<void(double t, const double* state, double* out)> rhs;
};

// Classical RK4. Throws divergence_error naming t if any rhs output is non-finite.
std::vector<double> rk4_step(const OdeSystem& sys, double t, const std::vector<double>& state,
                             double dt);

// In-place variant for hot loops; caller supplies 4 stage buffers of length dim
// plus a scratch state of length dim. No finiteness check (callers check at log points).
template <typename Rhs>
inline void rk4_step_inplace(Rhs&& rhs, double t, double dt, double* x, std::size_t dim,
                             double* k1, double* k2, double* k3, double* k4, double* tmp) {
    rhs(t, x, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    rhs(t + 0.5 * dt, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + dt * k3[i];
    rhs(t + dt, tmp, k4);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < dim; ++i)
        x[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

} // namespace gpebo
