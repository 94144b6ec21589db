#pragma once

#include "gpebo/filters.hpp"
#include "gpebo/mat.hpp"

#include <string>
#include <vector>

namespace gpebo {

struct LsFfConfig {
    double gamma = 0.0; // adaptation gain
    double beta = 0.0;  // forgetting factor
    double f0 = 0.0;    // F(0) = (1/f0) I
    double M = 0.0;     // spectral-norm cap on F
    std::vector<double> theta0; // empty means zeros

    void validate(std::size_t r) const; // all four scalars strictly positive
};

struct EstimatorState {
    std::vector<double> theta_hat;
    Mat F{0, 0};

    static EstimatorState initial(const LsFfConfig& cfg, std::size_t r);
};

// theta_hat' = gamma F psi' (z - psi theta_hat)
// F'         = -gamma F psi' psi F + beta F   while ||F|| <= M (spectral norm),
//              0 entirely once ||F|| > M.
// F can never shrink, so the cap latches permanently. The joint runner evaluates
// the switch once per step at the step's initial state; this function derives it
// from the state it is given.
EstimatorState lsff_rhs(const LsFfConfig& cfg, const EstimatorState& st,
                        const RegressionSample& sample);

// theta_hat' = gamma psi' (z - psi theta_hat)
std::vector<double> gradient_rhs(double gamma, const std::vector<double>& theta_hat,
                                 const RegressionSample& sample);

struct ExcitationReport {
    double t0 = 0.0;
    double delta = 0.0;
    Mat gram{0, 0};          // trapezoidal integral of psi' psi over [t0, t0+delta]
    double lambda_min = 0.0; // >= 0 by construction (squared singular value)
    double lambda_max = 0.0;
};

// Windowed excitation analysis over a logged sample stream. The Gram integral is
// accumulated as the triangular factor R of the weighted sample rows (Givens QR),
// and the Jacobi eigensolve runs one-sidedly on R, so tiny lambda_min values keep
// relative accuracy instead of drowning in lambda_max roundoff. Windows that do
// not fit the log are skipped with a note in *warnings.
std::vector<ExcitationReport> excitation_scan(const std::vector<RegressionSample>& samples,
                                              double delta, double stride,
                                              std::vector<std::string>* warnings = nullptr);

} // namespace gpebo
