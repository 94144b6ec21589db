#include "gpebo/estimators.hpp"

#include "gpebo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gpebo {

void LsFfConfig::validate(std::size_t r) const {
    if (!(gamma > 0.0)) throw config_error("estimator.gamma: must be > 0");
    if (!(beta > 0.0)) throw config_error("estimator.beta: must be > 0");
    if (!(f0 > 0.0)) throw config_error("estimator.f0: must be > 0");
    if (!(M > 0.0)) throw config_error("estimator.M: must be > 0");
    if (!theta0.empty() && theta0.size() != r)
        throw config_error("estimator.theta0: expected " + std::to_string(r) + " entries, got " +
                           std::to_string(theta0.size()));
}

EstimatorState EstimatorState::initial(const LsFfConfig& cfg, std::size_t r) {
    cfg.validate(r);
    EstimatorState st;
    st.theta_hat = cfg.theta0.empty() ? std::vector<double>(r, 0.0) : cfg.theta0;
    st.F = (1.0 / cfg.f0) * Mat::identity(r);
    return st;
}

EstimatorState lsff_rhs(const LsFfConfig& cfg, const EstimatorState& st,
                        const RegressionSample& sample) {
    const std::size_t r = st.theta_hat.size();
    if (sample.psi.size() != r || st.F.rows() != r || st.F.cols() != r)
        throw shape_error("lsff_rhs: psi length " + std::to_string(sample.psi.size()) +
                          " vs theta length " + std::to_string(r));

    double err = sample.z;
    for (std::size_t i = 0; i < r; ++i) err -= sample.psi[i] * st.theta_hat[i];

    std::vector<double> fpsi(r, 0.0); // F psi'
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) fpsi[i] += st.F(i, j) * sample.psi[j];

    EstimatorState d;
    d.theta_hat.resize(r);
    for (std::size_t i = 0; i < r; ++i) d.theta_hat[i] = cfg.gamma * fpsi[i] * err;

    d.F = Mat(r, r);
    if (!spec_norm_exceeds(st.F, cfg.M)) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                d.F(i, j) = -cfg.gamma * fpsi[i] * fpsi[j] + cfg.beta * st.F(i, j);
    }
    return d;
}

std::vector<double> gradient_rhs(double gamma, const std::vector<double>& theta_hat,
                                 const RegressionSample& sample) {
    const std::size_t r = theta_hat.size();
    if (sample.psi.size() != r)
        throw shape_error("gradient_rhs: psi length " + std::to_string(sample.psi.size()) +
                          " vs theta length " + std::to_string(r));
    double err = sample.z;
    for (std::size_t i = 0; i < r; ++i) err -= sample.psi[i] * theta_hat[i];
    std::vector<double> d(r);
    for (std::size_t i = 0; i < r; ++i) d[i] = gamma * sample.psi[i] * err;
    return d;
}

namespace {

// Rotates one weighted sample row into the upper-triangular factor.
void givens_push(std::vector<double>& R, std::size_t r, std::vector<double>& row) {
    for (std::size_t i = 0; i < r; ++i) {
        if (row[i] == 0.0) continue;
        double rii = R[i * r + i];
        double h = std::hypot(rii, row[i]);
        if (h == 0.0) continue;
        double c = rii / h, s = row[i] / h;
        R[i * r + i] = h;
        row[i] = 0.0;
        for (std::size_t j = i + 1; j < r; ++j) {
            double a = R[i * r + j], b = row[j];
            R[i * r + j] = c * a + s * b;
            row[j] = -s * a + c * b;
        }
    }
}

// One-sided Jacobi on the columns of R; returns squared singular values.
std::vector<double> squared_singular_values(std::vector<double> R, std::size_t r) {
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < r; ++p)
            for (std::size_t q = p + 1; q < r; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < r; ++i) {
                    app += R[i * r + p] * R[i * r + p];
                    aqq += R[i * r + q] * R[i * r + q];
                    apq += R[i * r + p] * R[i * r + q];
                }
                if (std::fabs(apq) <= 1e-13 * std::sqrt(app) * std::sqrt(aqq)) continue;
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                for (std::size_t i = 0; i < r; ++i) {
                    double a = R[i * r + p], b = R[i * r + q];
                    R[i * r + p] = c * a - s * b;
                    R[i * r + q] = s * a + c * b;
                }
                rotated = true;
            }
        if (!rotated) break;
    }
    std::vector<double> sq(r, 0.0);
    for (std::size_t j = 0; j < r; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < r; ++i) s += R[i * r + j] * R[i * r + j];
        sq[j] = s;
    }
    std::sort(sq.begin(), sq.end());
    return sq;
}

} // namespace

std::vector<ExcitationReport> excitation_scan(const std::vector<RegressionSample>& samples,
                                              double delta, double stride,
                                              std::vector<std::string>* warnings) {
    if (!(delta > 0.0)) throw config_error("check-pe.delta: must be > 0");
    if (!(stride > 0.0)) throw config_error("check-pe.stride: must be > 0");
    std::vector<ExcitationReport> reports;
    if (samples.size() < 2) return reports;

    const std::size_t r = samples.front().psi.size();
    const double t_first = samples.front().t;
    const double t_last = samples.back().t;
    const double eps = 1e-9 * std::max(1.0, delta);

    for (std::size_t w = 0;; ++w) {
        const double t0 = t_first + static_cast<double>(w) * stride;
        if (t0 > t_last + eps) break;
        if (t0 + delta > t_last + eps) {
            if (warnings)
                warnings->push_back("window [" + std::to_string(t0) + ", " +
                                    std::to_string(t0 + delta) + "] exceeds the log; skipped");
            break;
        }
        std::size_t lo = 0, hi = samples.size() - 1;
        while (lo + 1 < samples.size() && samples[lo].t < t0 - eps) ++lo;
        while (hi > 0 && samples[hi].t > t0 + delta + eps) --hi;
        if (hi <= lo) continue;

        std::vector<double> R(r * r, 0.0), row(r);
        for (std::size_t i = lo; i <= hi; ++i) {
            double wgt = 0.0;
            if (i > lo) wgt += 0.5 * (samples[i].t - samples[i - 1].t);
            if (i < hi) wgt += 0.5 * (samples[i + 1].t - samples[i].t);
            const double sw = std::sqrt(wgt);
            for (std::size_t j = 0; j < r; ++j) row[j] = sw * samples[i].psi[j];
            givens_push(R, r, row);
        }

        ExcitationReport rep;
        rep.t0 = t0;
        rep.delta = delta;
        rep.gram = Mat(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                double s = 0.0;
                for (std::size_t kk = 0; kk <= std::min(i, j); ++kk)
                    s += R[kk * r + i] * R[kk * r + j];
                rep.gram(i, j) = s;
            }
        std::vector<double> sq = squared_singular_values(R, r);
        rep.lambda_min = sq.front();
        rep.lambda_max = sq.back();
        reports.push_back(std::move(rep));
    }
    return reports;
}

} // namespace gpebo
