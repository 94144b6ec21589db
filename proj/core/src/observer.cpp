#include "gpebo/observer.hpp"

#include "gpebo/errors.hpp"
#include "gpebo/ode.hpp"

#include <algorithm>
#include <cmath>

namespace gpebo {

std::vector<double> reconstruct_state(const FilterState& fs, const ThetaVector& theta_hat) {
    const std::size_t n = fs.n;
    if (theta_hat.e0.size() != n || theta_hat.k.size() != n || theta_hat.b.size() != n)
        throw shape_error("reconstruct_state: theta partition size vs n=" + std::to_string(n));
    std::vector<double> xh(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = fs.xi[i];
        for (std::size_t j = 0; j < n; ++j)
            s += -fs.phi(i, j) * theta_hat.e0[j] + fs.eta(i, j) * theta_hat.k[j] +
                 fs.zeta(i, j) * theta_hat.b[j];
        xh[i] = s;
    }
    return xh;
}

namespace {

// A0(t) into a flat row-major buffer without allocating.
struct A0Eval {
    const ObserverConfig& cfg;
    std::vector<double> l, c;

    explicit A0Eval(const ObserverConfig& config) : cfg(config), l(config.n), c(config.n) {}

    void operator()(double t, double* a0) {
        const std::size_t n = cfg.n;
        for (std::size_t i = 0; i < n; ++i) {
            l[i] = eval_expr(cfg.L[i], t);
            c[i] = eval_expr(cfg.C[i], t);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a0[i * n + j] = eval_expr(cfg.A[i * n + j], t) - l[i] * c[j];
    }
};

} // namespace

AssumptionReport assumption_monitors(const ObserverConfig& cfg, const PlantSpec& plant, double dt,
                                     double t_final, double c1_cap, double c2_cap) {
    cfg.validate();
    plant.validate();
    if (!(dt > 0.0)) throw config_error("sim.dt: must be > 0");
    if (!(t_final > 0.0)) throw config_error("sim.t_final: must be > 0");

    const std::size_t n = cfg.n;
    const std::size_t steps = static_cast<std::size_t>(std::llround(t_final / dt));
    A0Eval a0(cfg);
    std::vector<double> a0buf(n * n);

    AssumptionReport rep;

    // Norm and determinant sweep of phi.
    {
        std::vector<double> phi(n * n, 0.0), k1(n * n), k2(n * n), k3(n * n), k4(n * n),
            tmp(n * n);
        for (std::size_t i = 0; i < n; ++i) phi[i * n + i] = 1.0;
        auto rhs = [&](double t, const double* s, double* out) {
            a0(t, a0buf.data());
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (std::size_t kk = 0; kk < n; ++kk)
                        acc += a0buf[i * n + kk] * s[kk * n + j];
                    out[i * n + j] = acc;
                }
        };
        Mat phim(n, n);
        auto scan = [&]() {
            for (std::size_t i = 0; i < n * n; ++i) phim.data()[i] = phi[i];
            rep.phi_sup_norm = std::max(rep.phi_sup_norm, spectral_norm(phim));
            rep.min_abs_det_phi = std::min(rep.min_abs_det_phi, std::fabs(det(phim)));
        };
        rep.min_abs_det_phi = 1.0; // phi(0) = I
        scan();
        for (std::size_t step = 0; step < steps; ++step) {
            rk4_step_inplace(rhs, static_cast<double>(step) * dt, dt, phi.data(), n * n, k1.data(),
                             k2.data(), k3.data(), k4.data(), tmp.data());
            scan();
        }
    }

    // Input-to-state integral on a decimated restart grid.
    {
        const std::size_t drec = std::max<std::size_t>(1, steps / 500);
        const std::size_t ns = steps / drec; // restart indices 0..ns at times j*ds
        const double ds = static_cast<double>(drec) * dt;
        std::vector<double> norms((ns + 1) * (ns + 1), 0.0); // [restart j][grid i]
        std::vector<double> w(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
        auto rhs = [&](double t, const double* s, double* out) {
            a0(t, a0buf.data());
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t kk = 0; kk < n; ++kk) acc += a0buf[i * n + kk] * s[kk];
                out[i] = acc;
            }
        };
        auto norm2 = [&](const std::vector<double>& v) {
            double s = 0.0;
            for (double e : v) s += e * e;
            return std::sqrt(s);
        };
        for (std::size_t j = 0; j <= ns; ++j) {
            w = plant.b_true;
            norms[j * (ns + 1) + j] = norm2(w);
            for (std::size_t step = j * drec; step < ns * drec; ++step) {
                rk4_step_inplace(rhs, static_cast<double>(step) * dt, dt, w.data(), n, k1.data(),
                                 k2.data(), k3.data(), k4.data(), tmp.data());
                if ((step + 1) % drec == 0) norms[j * (ns + 1) + (step + 1) / drec] = norm2(w);
            }
        }
        for (std::size_t i = 1; i <= ns; ++i) {
            double integral = 0.5 * ds * (norms[0 * (ns + 1) + i] + norms[i * (ns + 1) + i]);
            for (std::size_t j = 1; j < i; ++j) integral += ds * norms[j * (ns + 1) + i];
            rep.bibs_integral_sup = std::max(rep.bibs_integral_sup, integral);
        }
    }

    rep.stable = std::isfinite(rep.phi_sup_norm) && std::isfinite(rep.bibs_integral_sup) &&
                 rep.phi_sup_norm <= c1_cap && rep.bibs_integral_sup <= c2_cap;
    return rep;
}

namespace {

SignalMetrics metrics_for(const std::vector<double>& times, const double* err, std::size_t stride,
                          std::size_t count, const double* band, std::size_t band_stride) {
    SignalMetrics m;
    const double t_final = times.back();
    std::size_t tail_start = count - std::max<std::size_t>(1, count / 10);
    double sum_sq = 0.0;
    std::size_t tail_n = 0;
    std::size_t last_outside = 0;
    bool ever_outside = false;
    for (std::size_t i = 0; i < count; ++i) {
        const double e = std::fabs(err[i * stride]);
        m.max_abs = std::max(m.max_abs, e);
        if (i >= tail_start) {
            sum_sq += e * e;
            ++tail_n;
        }
        if (e > band[i * band_stride]) {
            last_outside = i;
            ever_outside = true;
        }
    }
    m.rms_final_window = std::sqrt(sum_sq / static_cast<double>(tail_n));
    if (!ever_outside) {
        m.converged = true;
        m.time_to_tolerance = times.front();
    } else if (last_outside + 1 < count) {
        m.converged = true;
        m.time_to_tolerance = times[last_outside + 1];
    } else {
        m.converged = false;
        m.time_to_tolerance = t_final; // sentinel: still outside at the end
    }
    return m;
}

} // namespace

ErrorSummary error_metrics(const TrajectoryLog& traj, const EstimateLog& est,
                           const std::vector<double>& theta_true, double rel_tol) {
    const std::size_t count = est.samples();
    if (count == 0 || traj.samples() != count)
        throw shape_error("error_metrics: logs not aligned (" + std::to_string(traj.samples()) +
                          " vs " + std::to_string(count) + " samples)");
    if (theta_true.size() != est.r)
        throw shape_error("error_metrics: theta_true length vs r=" + std::to_string(est.r));

    ErrorSummary summary;
    summary.rel_tol = rel_tol;

    std::vector<double> band(count);
    for (std::size_t p = 0; p < est.r; ++p) {
        const double b = rel_tol * (1.0 + std::fabs(theta_true[p]));
        band.assign(count, b);
        summary.params.push_back(
            metrics_for(est.times, est.param_err.data() + p, est.r, count, band.data(), 1));
    }
    for (std::size_t s = 0; s < est.n; ++s) {
        for (std::size_t i = 0; i < count; ++i)
            band[i] = rel_tol * (1.0 + std::fabs(traj.x[i * traj.n + s]));
        summary.states.push_back(
            metrics_for(est.times, est.state_err.data() + s, est.n, count, band.data(), 1));
    }
    return summary;
}

} // namespace gpebo
