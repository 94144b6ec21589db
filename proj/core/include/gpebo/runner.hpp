#pragma once

#include "gpebo/estimators.hpp"
#include "gpebo/filters.hpp"
#include "gpebo/observer.hpp"
#include "gpebo/plant.hpp"
#include "gpebo/scenario.hpp"

#include <cstddef>
#include <vector>

namespace gpebo {

// filters_only integrates plant + cascade (persistent-excitation and identity
// checks); full adds the selected estimator to the joint state.
enum class RunMode { filters_only, full };

struct RunOptions {
    RunMode mode = RunMode::full;
    double dt = 0.0;            // 0 means scenario value
    double t_final = 0.0;       // 0 means scenario value
    std::size_t log_every = 0;  // 0 means max(1, round(1e-3 / dt))
};

// Decimated joint-state log; all per-sample blocks are sample-major flats.
struct RunLog {
    std::size_t n = 0;
    std::size_t r = 0;
    RunMode mode = RunMode::full;
    bool has_lsff = false;
    bool f_frozen = false; // the norm cap latched at some point during the run
    double dt = 0.0;

    std::vector<double> times;
    std::vector<double> u;
    std::vector<double> y; // measured value fed to the filters
    std::vector<double> x;         // n
    std::vector<double> xi;        // n
    std::vector<double> eta;       // n*n
    std::vector<double> zeta;      // n*n
    std::vector<double> phi;       // n*n
    std::vector<double> z;         // 1
    std::vector<double> psi;       // r
    std::vector<double> theta_hat; // r, full mode only
    std::vector<double> F;         // r*r, lsff only

    std::size_t samples() const { return times.size(); }
};

// Single flattened RK4 over [0, t_final] so every subsystem sees identical time
// samples. Throws divergence_error (named signal and time) on non-finite state,
// |x_i| > 1e9, or F losing positive definiteness, checked at log samples.
RunLog run_simulation(const Scenario& sc, const RunOptions& opts);

TrajectoryLog to_trajectory(const RunLog& log);

// Requires a full-mode log; x_hat is reconstructed per sample from the logged
// filter states and theta_hat.
EstimateLog to_estimates(const RunLog& log, const std::vector<double>& theta_true);

// x_hat series using one fixed theta for every sample (works in both modes).
std::vector<double> reconstruct_series(const RunLog& log, const std::vector<double>& theta);

FilterState filter_state_at(const RunLog& log, std::size_t i);
Mat f_matrix_at(const RunLog& log, std::size_t i);

} // namespace gpebo
