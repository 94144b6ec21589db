#pragma once

#include "gpebo/filters.hpp"
#include "gpebo/plant.hpp"

#include <vector>

namespace gpebo {

// x_hat = xi - phi e0_hat + eta k_hat + zeta b_hat.
std::vector<double> reconstruct_state(const FilterState& fs, const ThetaVector& theta_hat);

struct EstimateLog {
    std::size_t n = 0;
    std::size_t r = 0;
    std::vector<double> times;
    std::vector<double> x_hat;     // sample-major, n per sample
    std::vector<double> theta_hat; // sample-major, r per sample
    std::vector<double> state_err; // x_hat - x
    std::vector<double> param_err; // theta_hat - theta_true

    std::size_t samples() const { return times.size(); }
};

struct AssumptionReport {
    double phi_sup_norm = 0.0;      // sup_t ||phi(t)||
    double bibs_integral_sup = 0.0; // sup_t of the input-to-state integral
    double min_abs_det_phi = 0.0;   // diagnostic: |det phi| can underflow on long horizons
    bool stable = false;
};

// Integrates phi' = A0 phi for the norm bound, and per-restart sensitivity ODEs
// w' = A0 w, w(s) = b on a decimated s-grid for the input-to-state integral
// sup_t integral_0^t ||phi(t) phi(s)^-1 b|| ds. Restarting avoids inverting
// phi(s), whose determinant underflows on long horizons; |det phi| is still
// reported as a diagnostic. Integral accuracy is O(restart spacing squared).
AssumptionReport assumption_monitors(const ObserverConfig& cfg, const PlantSpec& plant, double dt,
                                     double t_final, double c1_cap = 100.0, double c2_cap = 1000.0);

struct SignalMetrics {
    double rms_final_window = 0.0; // RMS over the last 10% of the horizon
    double max_abs = 0.0;
    double time_to_tolerance = 0.0; // t_final sentinel when never converged
    bool converged = false;
};

struct ErrorSummary {
    double rel_tol = 0.0;
    std::vector<SignalMetrics> params; // r entries, band 0.05 (1 + |theta_true_i|)
    std::vector<SignalMetrics> states; // n entries, band 0.05 (1 + |x_i(t)|) per sample
};

// time_to_tolerance is the first time after which the error stays inside its band.
ErrorSummary error_metrics(const TrajectoryLog& traj, const EstimateLog& est,
                           const std::vector<double>& theta_true, double rel_tol = 0.05);

} // namespace gpebo
