#pragma once

#include "gpebo/mat.hpp"
#include "gpebo/plant.hpp"
#include "gpebo/timefunc.hpp"

#include <vector>

namespace gpebo {

// Output-injection gain L(t) plus copies of the plant's A(t), C(t);
// A0(t) = A(t) - L(t) C'(t) is formed at evaluation time, never stored as text.
struct ObserverConfig {
    std::size_t n = 0;
    std::vector<TimeExpr> L; // n
    std::vector<TimeExpr> A; // row-major n*n, copied from the plant
    std::vector<TimeExpr> C; // n, copied from the plant

    static ObserverConfig derive(const PlantSpec& plant, std::vector<TimeExpr> L);
    void validate() const;
    Mat eval_A0(double t) const;
    std::vector<double> eval_L(double t) const;
};

// Cascade state: xi (n), eta (n*n), zeta (n*n), phi (n*n).
struct FilterState {
    std::size_t n = 0;
    std::vector<double> xi;
    Mat eta{0, 0};
    Mat zeta{0, 0};
    Mat phi{0, 0};

    // xi = 0, eta = 0, zeta = 0, phi = I.
    static FilterState initial(std::size_t n);
};

// d/dt of the cascade at (t, fs) driven by the scalar measurement y and input u:
//   xi'  = A0 xi + L y
//   eta' = A0 eta + I y
//   zeta'= A0 zeta + I u
//   phi' = A0 phi
FilterState filter_rhs(const ObserverConfig& cfg, double t, const FilterState& fs, double y,
                       double u);

// One scalar regression equation z = psi . Theta with Theta = [-x(0); k; b].
struct RegressionSample {
    double t = 0.0;
    double z = 0.0;
    std::vector<double> psi; // length 3n
};

// Unknown-parameter vector partitioned as [e0; k; b], length 3n.
struct ThetaVector {
    std::vector<double> e0;
    std::vector<double> k;
    std::vector<double> b;

    std::vector<double> to_flat() const;
    static ThetaVector from_flat(const std::vector<double>& flat);
    static ThetaVector true_of(const PlantSpec& plant); // [-x0; k_true; b_true]
};

// z = y - C'(t) xi; psi = [-C'(t) phi | C'(t) eta | C'(t) zeta].
RegressionSample assemble_regression(const PlantSpec& plant, const ObserverConfig& cfg, double t,
                                     const FilterState& fs, double y);

struct PhiReport {
    double sup_spectral_norm = 0.0;
    double min_abs_det = 0.0;
    bool within_bound = false;
};

// Scans logged phi samples (row-major n*n each) against a norm cap.
PhiReport fundamental_matrix_checks(const std::vector<Mat>& phi_log, double c1_cap = 100.0);

} // namespace gpebo
