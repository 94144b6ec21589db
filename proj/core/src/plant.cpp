#include "gpebo/plant.hpp"

#include "gpebo/errors.hpp"
#include "gpebo/ode.hpp"

#include <cmath>
#include <string>

namespace gpebo {

void PlantSpec::validate() const {
    if (n < 1) throw config_error("plant.n: must be >= 1");
    if (A.size() != n * n)
        throw config_error("plant.A: expected " + std::to_string(n * n) + " entries, got " +
                           std::to_string(A.size()));
    if (C.size() != n)
        throw config_error("plant.C: expected " + std::to_string(n) + " entries, got " +
                           std::to_string(C.size()));
    if (k_true.size() != n) throw config_error("plant.k: expected " + std::to_string(n) + " entries");
    if (b_true.size() != n) throw config_error("plant.b: expected " + std::to_string(n) + " entries");
    if (x0.size() != n) throw config_error("plant.x0: expected " + std::to_string(n) + " entries");
    if (!(noise_std >= 0.0)) throw config_error("plant.noise.std: must be >= 0");
}

Mat PlantSpec::eval_A(double t) const {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = eval_expr(A[i * n + j], t);
    return m;
}

std::vector<double> PlantSpec::eval_C(double t) const {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = eval_expr(C[i], t);
    return c;
}

double measure(const PlantSpec& spec, double t, const std::vector<double>& x) {
    if (x.size() != spec.n)
        throw shape_error("measure: state length " + std::to_string(x.size()) + " vs n=" +
                          std::to_string(spec.n));
    double y = 0.0;
    for (std::size_t i = 0; i < spec.n; ++i) y += eval_expr(spec.C[i], t) * x[i];
    return y;
}

void plant_rhs(const PlantSpec& spec, double t, const double* x, double* dx) {
    const std::size_t n = spec.n;
    double y = 0.0;
    for (std::size_t i = 0; i < n; ++i) y += eval_expr(spec.C[i], t) * x[i];
    const double u = eval_expr(spec.input, t);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += eval_expr(spec.A[i * n + j], t) * x[j];
        dx[i] = s + spec.k_true[i] * y + spec.b_true[i] * u;
    }
}

TrajectoryLog simulate_plant(const PlantSpec& spec, double dt, double t_final) {
    spec.validate();
    if (!(dt > 0.0)) throw config_error("sim.dt: must be > 0");
    if (!(t_final > 0.0)) throw config_error("sim.t_final: must be > 0");

    const std::size_t n = spec.n;
    const std::size_t steps = static_cast<std::size_t>(std::llround(t_final / dt));
    TrajectoryLog log;
    log.dt = dt;
    log.n = n;
    log.times.reserve(steps + 1);
    log.x.reserve((steps + 1) * n);
    log.y.reserve(steps + 1);
    log.u.reserve(steps + 1);

    std::vector<double> x = spec.x0;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto rhs = [&spec](double t, const double* s, double* out) { plant_rhs(spec, t, s, out); };

    auto record = [&](double t) {
        log.times.push_back(t);
        log.x.insert(log.x.end(), x.begin(), x.end());
        log.y.push_back(measure(spec, t, x));
        log.u.push_back(eval_expr(spec.input, t));
    };
    record(0.0);

    for (std::size_t step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        rk4_step_inplace(rhs, t, dt, x.data(), n, k1.data(), k2.data(), k3.data(), k4.data(),
                         tmp.data());
        const double tn = static_cast<double>(step + 1) * dt;
        for (std::size_t i = 0; i < n; ++i)
            if (!(std::fabs(x[i]) <= 1e9))
                throw divergence_error("plant state x" + std::to_string(i + 1) +
                                           " left |x| <= 1e9",
                                       tn);
        record(tn);
    }
    return log;
}

} // namespace gpebo
