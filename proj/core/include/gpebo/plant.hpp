#pragma once

#include "gpebo/mat.hpp"
#include "gpebo/timefunc.hpp"

#include <cstdint>
#include <vector>

namespace gpebo {

// True system: dx = A(t)x + k (C'(t)x) + b u(t), y = C'(t)x.
// noise_* is an optional measurement-noise hook used only by the joint runner;
// it defaults to zero and the modular ops below stay exact.
struct PlantSpec {
    std::size_t n = 0;
    std::vector<TimeExpr> A; // row-major n*n
    std::vector<TimeExpr> C; // n
    std::vector<double> k_true;
    std::vector<double> b_true;
    std::vector<double> x0;
    TimeExpr input;
    double noise_std = 0.0;
    std::uint64_t noise_seed = 0;

    void validate() const; // throws config_error naming the offending field
    Mat eval_A(double t) const;
    std::vector<double> eval_C(double t) const;
};

struct TrajectoryLog {
    double dt = 0.0;
    std::size_t n = 0;
    std::vector<double> times;
    std::vector<double> x; // sample-major, n entries per sample
    std::vector<double> y;
    std::vector<double> u;

    std::size_t samples() const { return times.size(); }
    const double* x_at(std::size_t i) const { return x.data() + i * n; }
};

double measure(const PlantSpec& spec, double t, const std::vector<double>& x);

// Writes dx; x and dx have length spec.n.
void plant_rhs(const PlantSpec& spec, double t, const double* x, double* dx);

// RK4 from x0 over [0, t_final], logging every grid point.
// Throws divergence_error naming time and signal when any |x_i| > 1e9.
TrajectoryLog simulate_plant(const PlantSpec& spec, double dt, double t_final);

} // namespace gpebo
