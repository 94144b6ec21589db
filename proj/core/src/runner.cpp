#include "gpebo/runner.hpp"

#include "gpebo/errors.hpp"
#include "gpebo/ode.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace gpebo {

namespace {

// Shared sin/cos tables over the distinct angular frequencies of a scenario;
// every expression evaluation in the hot loop reuses one table fill per stage.
struct CompiledTerm {
    std::size_t w = 0;
    double cs = 0.0; // coefficient on sin(w t)
    double cc = 0.0; // coefficient on cos(w t)
};

struct CompiledExpr {
    double c0 = 0.0;
    std::vector<CompiledTerm> terms;
};

struct TrigPlan {
    std::vector<double> omegas;

    std::size_t index_of(double w) {
        for (std::size_t i = 0; i < omegas.size(); ++i)
            if (omegas[i] == w) return i;
        omegas.push_back(w);
        return omegas.size() - 1;
    }

    CompiledExpr compile(const TimeExpr& e) {
        CompiledExpr ce;
        for (const Term& t : e.terms) {
            if (t.kind == Term::Kind::constant) {
                ce.c0 += t.value;
                continue;
            }
            CompiledTerm ct;
            ct.w = index_of(t.omega);
            const double cp = std::cos(t.phase), sp = std::sin(t.phase);
            if (t.kind == Term::Kind::sin) {
                ct.cs = t.amplitude * cp;
                ct.cc = t.amplitude * sp;
            } else {
                ct.cs = -t.amplitude * sp;
                ct.cc = t.amplitude * cp;
            }
            ce.terms.push_back(ct);
        }
        return ce;
    }

    void fill(double t, double* s, double* c) const {
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            const double a = omegas[i] * t;
            s[i] = std::sin(a);
            c[i] = std::cos(a);
        }
    }

    static double eval(const CompiledExpr& e, const double* s, const double* c) {
        double v = e.c0;
        for (const CompiledTerm& t : e.terms) v += t.cs * s[t.w] + t.cc * c[t.w];
        return v;
    }
};

struct Layout {
    std::size_t n = 0, r = 0;
    std::size_t ox = 0, oxi = 0, oeta = 0, ozeta = 0, ophi = 0, oth = 0, of = 0;
    std::size_t dim = 0;

    Layout(std::size_t n_, RunMode mode, bool lsff) : n(n_), r(3 * n_) {
        ox = 0;
        oxi = n;
        oeta = 2 * n;
        ozeta = oeta + n * n;
        ophi = ozeta + n * n;
        dim = ophi + n * n;
        if (mode == RunMode::full) {
            oth = dim;
            dim += r;
            if (lsff) {
                of = dim;
                dim += r * r;
            }
        }
    }
};

} // namespace

RunLog run_simulation(const Scenario& sc, const RunOptions& opts) {
    sc.validate();
    const double dt = opts.dt > 0.0 ? opts.dt : sc.sim.dt;
    const double t_final = opts.t_final > 0.0 ? opts.t_final : sc.sim.t_final;
    if (!(dt > 0.0)) throw config_error("sim.dt: must be > 0");
    if (!(t_final >= dt)) throw config_error("sim.t_final: must be >= sim.dt");
    const std::size_t log_every =
        opts.log_every > 0
            ? opts.log_every
            : static_cast<std::size_t>(std::max<long long>(1, std::llround(1e-3 / dt)));

    const PlantSpec& plant = sc.plant;
    const std::size_t n = plant.n;
    const bool full = opts.mode == RunMode::full;
    const bool lsff = full && sc.estimator.kind == EstimatorSpec::Kind::lsff;
    const Layout lay(n, opts.mode, lsff);
    const std::size_t r = lay.r;

    TrigPlan plan;
    std::vector<CompiledExpr> ca(n * n), cc(n), cl(n);
    for (std::size_t i = 0; i < n * n; ++i) ca[i] = plan.compile(plant.A[i]);
    for (std::size_t i = 0; i < n; ++i) cc[i] = plan.compile(plant.C[i]);
    for (std::size_t i = 0; i < n; ++i) cl[i] = plan.compile(sc.observer_L[i]);
    CompiledExpr cu = plan.compile(plant.input);
    const std::size_t nw = plan.omegas.size();

    // Joint initial state.
    std::vector<double> st(lay.dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) st[lay.ox + i] = plant.x0[i];
    for (std::size_t i = 0; i < n; ++i) st[lay.ophi + i * n + i] = 1.0;
    double gamma = 0.0, beta = 0.0, cap = 0.0;
    if (full) {
        const std::vector<double>& th0 = sc.estimator.theta0;
        if (!th0.empty())
            std::copy(th0.begin(), th0.end(), st.begin() + static_cast<long>(lay.oth));
        if (lsff) {
            sc.estimator.lsff.validate(r);
            gamma = sc.estimator.lsff.gamma;
            beta = sc.estimator.lsff.beta;
            cap = sc.estimator.lsff.M;
            for (std::size_t i = 0; i < r; ++i) st[lay.of + i * r + i] = 1.0 / sc.estimator.lsff.f0;
        } else {
            gamma = sc.estimator.gradient_gamma;
        }
    }

    // Scratch reused across stages.
    std::vector<double> stab(nw), ctab(nw), aval(n * n), a0val(n * n), lval(n), cval(n),
        psib(r), fpsi(r);
    double noise_cur = 0.0;
    bool frozen = false;

    auto rhs = [&](double t, const double* s, double* out) {
        plan.fill(t, stab.data(), ctab.data());
        for (std::size_t i = 0; i < n * n; ++i)
            aval[i] = TrigPlan::eval(ca[i], stab.data(), ctab.data());
        for (std::size_t i = 0; i < n; ++i) {
            cval[i] = TrigPlan::eval(cc[i], stab.data(), ctab.data());
            lval[i] = TrigPlan::eval(cl[i], stab.data(), ctab.data());
        }
        const double uval = TrigPlan::eval(cu, stab.data(), ctab.data());

        double y_true = 0.0;
        for (std::size_t i = 0; i < n; ++i) y_true += cval[i] * s[lay.ox + i];
        const double y_meas = y_true + noise_cur;

        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += aval[i * n + j] * s[lay.ox + j];
            out[lay.ox + i] = acc + plant.k_true[i] * y_true + plant.b_true[i] * uval;
        }

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a0val[i * n + j] = aval[i * n + j] - lval[i] * cval[j];

        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += a0val[i * n + j] * s[lay.oxi + j];
            out[lay.oxi + i] = acc + lval[i] * y_meas;
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double de = 0.0, dz = 0.0, dp = 0.0;
                for (std::size_t kk = 0; kk < n; ++kk) {
                    const double a0ik = a0val[i * n + kk];
                    de += a0ik * s[lay.oeta + kk * n + j];
                    dz += a0ik * s[lay.ozeta + kk * n + j];
                    dp += a0ik * s[lay.ophi + kk * n + j];
                }
                out[lay.oeta + i * n + j] = de + (i == j ? y_meas : 0.0);
                out[lay.ozeta + i * n + j] = dz + (i == j ? uval : 0.0);
                out[lay.ophi + i * n + j] = dp;
            }

        if (!full) return;

        double zv = y_meas;
        for (std::size_t i = 0; i < n; ++i) zv -= cval[i] * s[lay.oxi + i];
        for (std::size_t j = 0; j < n; ++j) {
            double pp = 0.0, pe = 0.0, pz = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                pp += cval[i] * s[lay.ophi + i * n + j];
                pe += cval[i] * s[lay.oeta + i * n + j];
                pz += cval[i] * s[lay.ozeta + i * n + j];
            }
            psib[j] = -pp;
            psib[n + j] = pe;
            psib[2 * n + j] = pz;
        }
        double err = zv;
        for (std::size_t i = 0; i < r; ++i) err -= psib[i] * s[lay.oth + i];

        if (lsff) {
            const double* F = s + lay.of;
            for (std::size_t i = 0; i < r; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < r; ++j) acc += F[i * r + j] * psib[j];
                fpsi[i] = acc;
            }
            for (std::size_t i = 0; i < r; ++i) out[lay.oth + i] = gamma * fpsi[i] * err;
            double* dF = out + lay.of;
            if (frozen) {
                for (std::size_t i = 0; i < r * r; ++i) dF[i] = 0.0;
            } else {
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j)
                        dF[i * r + j] = -gamma * fpsi[i] * fpsi[j] + beta * F[i * r + j];
            }
        } else {
            for (std::size_t i = 0; i < r; ++i) out[lay.oth + i] = gamma * psib[i] * err;
        }
    };

    const std::size_t steps = static_cast<std::size_t>(std::llround(t_final / dt));
    RunLog log;
    log.n = n;
    log.r = r;
    log.mode = opts.mode;
    log.has_lsff = lsff;
    log.dt = dt;
    const std::size_t est_samples = steps / log_every + 2;
    log.times.reserve(est_samples);
    log.u.reserve(est_samples);
    log.y.reserve(est_samples);
    log.x.reserve(est_samples * n);
    log.xi.reserve(est_samples * n);
    log.eta.reserve(est_samples * n * n);
    log.zeta.reserve(est_samples * n * n);
    log.phi.reserve(est_samples * n * n);
    log.z.reserve(est_samples);
    log.psi.reserve(est_samples * r);
    if (full) log.theta_hat.reserve(est_samples * r);
    if (lsff) log.F.reserve(est_samples * r * r);

    std::mt19937_64 rng(plant.noise_seed);
    std::normal_distribution<double> ndist(0.0, 1.0);
    const bool noisy = plant.noise_std > 0.0;

    auto check_and_record = [&](double t) {
        for (std::size_t i = 0; i < lay.dim; ++i)
            if (!std::isfinite(st[i]))
                throw divergence_error("non-finite joint state (component " + std::to_string(i) +
                                           ")",
                                       t);
        for (std::size_t i = 0; i < n; ++i)
            if (std::fabs(st[lay.ox + i]) > 1e9)
                throw divergence_error("plant state x" + std::to_string(i + 1) + " left |x| <= 1e9",
                                       t);
        if (lsff) {
            Mat F(r, r);
            for (std::size_t i = 0; i < r * r; ++i) F.data()[i] = st[lay.of + i];
            std::vector<double> eig = sym_eigenvalues(F);
            if (eig.front() < -1e-9 * std::max(1.0, std::fabs(eig.back())))
                throw divergence_error("covariance F lost positive definiteness (min eig " +
                                           std::to_string(eig.front()) + ")",
                                       t);
        }

        plan.fill(t, stab.data(), ctab.data());
        for (std::size_t i = 0; i < n; ++i)
            cval[i] = TrigPlan::eval(cc[i], stab.data(), ctab.data());
        const double uval = TrigPlan::eval(cu, stab.data(), ctab.data());
        double y_true = 0.0;
        for (std::size_t i = 0; i < n; ++i) y_true += cval[i] * st[lay.ox + i];
        const double y_meas = y_true + noise_cur;

        log.times.push_back(t);
        log.u.push_back(uval);
        log.y.push_back(y_meas);
        log.x.insert(log.x.end(), st.begin() + static_cast<long>(lay.ox),
                     st.begin() + static_cast<long>(lay.ox + n));
        log.xi.insert(log.xi.end(), st.begin() + static_cast<long>(lay.oxi),
                      st.begin() + static_cast<long>(lay.oxi + n));
        log.eta.insert(log.eta.end(), st.begin() + static_cast<long>(lay.oeta),
                       st.begin() + static_cast<long>(lay.oeta + n * n));
        log.zeta.insert(log.zeta.end(), st.begin() + static_cast<long>(lay.ozeta),
                        st.begin() + static_cast<long>(lay.ozeta + n * n));
        log.phi.insert(log.phi.end(), st.begin() + static_cast<long>(lay.ophi),
                       st.begin() + static_cast<long>(lay.ophi + n * n));

        double zv = y_meas;
        for (std::size_t i = 0; i < n; ++i) zv -= cval[i] * st[lay.oxi + i];
        log.z.push_back(zv);
        for (std::size_t j = 0; j < n; ++j) {
            double pp = 0.0, pe = 0.0, pz = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                pp += cval[i] * st[lay.ophi + i * n + j];
                pe += cval[i] * st[lay.oeta + i * n + j];
                pz += cval[i] * st[lay.ozeta + i * n + j];
            }
            psib[j] = -pp;
            psib[n + j] = pe;
            psib[2 * n + j] = pz;
        }
        log.psi.insert(log.psi.end(), psib.begin(), psib.end());
        if (full)
            log.theta_hat.insert(log.theta_hat.end(), st.begin() + static_cast<long>(lay.oth),
                                 st.begin() + static_cast<long>(lay.oth + r));
        if (lsff)
            log.F.insert(log.F.end(), st.begin() + static_cast<long>(lay.of),
                         st.begin() + static_cast<long>(lay.of + r * r));
    };

    std::vector<double> k1(lay.dim), k2(lay.dim), k3(lay.dim), k4(lay.dim), tmp(lay.dim);
    for (std::size_t step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        if (noisy) noise_cur = plant.noise_std * ndist(rng);
        if (lsff && !frozen && spec_norm_exceeds(st.data() + lay.of, r, cap)) {
            // The cap latches: with dF = 0, F never shrinks back below it.
            frozen = true;
            log.f_frozen = true;
        }
        if (step % log_every == 0) check_and_record(t);
        rk4_step_inplace(rhs, t, dt, st.data(), lay.dim, k1.data(), k2.data(), k3.data(),
                         k4.data(), tmp.data());
        if (lsff && !frozen) {
            double* F = st.data() + lay.of;
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = i + 1; j < r; ++j) {
                    const double m = 0.5 * (F[i * r + j] + F[j * r + i]);
                    F[i * r + j] = m;
                    F[j * r + i] = m;
                }
        }
    }
    noise_cur = noisy ? plant.noise_std * ndist(rng) : 0.0;
    check_and_record(static_cast<double>(steps) * dt);
    return log;
}

TrajectoryLog to_trajectory(const RunLog& log) {
    TrajectoryLog traj;
    traj.n = log.n;
    traj.dt = log.samples() > 1 ? log.times[1] - log.times[0] : log.dt;
    traj.times = log.times;
    traj.x = log.x;
    traj.y = log.y;
    traj.u = log.u;
    return traj;
}

std::vector<double> reconstruct_series(const RunLog& log, const std::vector<double>& theta) {
    const std::size_t n = log.n, r = log.r;
    if (theta.size() != r)
        throw shape_error("reconstruct_series: theta length " + std::to_string(theta.size()) +
                          " vs r=" + std::to_string(r));
    std::vector<double> xh(log.samples() * n);
    for (std::size_t s = 0; s < log.samples(); ++s) {
        const double* xi = log.xi.data() + s * n;
        const double* eta = log.eta.data() + s * n * n;
        const double* zeta = log.zeta.data() + s * n * n;
        const double* phi = log.phi.data() + s * n * n;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = xi[i];
            for (std::size_t j = 0; j < n; ++j)
                acc += -phi[i * n + j] * theta[j] + eta[i * n + j] * theta[n + j] +
                       zeta[i * n + j] * theta[2 * n + j];
            xh[s * n + i] = acc;
        }
    }
    return xh;
}

EstimateLog to_estimates(const RunLog& log, const std::vector<double>& theta_true) {
    if (log.mode != RunMode::full)
        throw error("to_estimates: needs a full-mode run log");
    const std::size_t n = log.n, r = log.r, count = log.samples();
    if (theta_true.size() != r)
        throw shape_error("to_estimates: theta_true length vs r=" + std::to_string(r));
    EstimateLog est;
    est.n = n;
    est.r = r;
    est.times = log.times;
    est.theta_hat = log.theta_hat;
    est.x_hat.resize(count * n);
    est.state_err.resize(count * n);
    est.param_err.resize(count * r);
    std::vector<double> th(r);
    for (std::size_t s = 0; s < count; ++s) {
        const double* xi = log.xi.data() + s * n;
        const double* eta = log.eta.data() + s * n * n;
        const double* zeta = log.zeta.data() + s * n * n;
        const double* phi = log.phi.data() + s * n * n;
        for (std::size_t i = 0; i < r; ++i) th[i] = log.theta_hat[s * r + i];
        for (std::size_t i = 0; i < n; ++i) {
            double acc = xi[i];
            for (std::size_t j = 0; j < n; ++j)
                acc += -phi[i * n + j] * th[j] + eta[i * n + j] * th[n + j] +
                       zeta[i * n + j] * th[2 * n + j];
            est.x_hat[s * n + i] = acc;
            est.state_err[s * n + i] = acc - log.x[s * n + i];
        }
        for (std::size_t i = 0; i < r; ++i) est.param_err[s * r + i] = th[i] - theta_true[i];
    }
    return est;
}

FilterState filter_state_at(const RunLog& log, std::size_t i) {
    const std::size_t n = log.n;
    FilterState fs = FilterState::initial(n);
    for (std::size_t j = 0; j < n; ++j) fs.xi[j] = log.xi[i * n + j];
    for (std::size_t j = 0; j < n * n; ++j) {
        fs.eta.data()[j] = log.eta[i * n * n + j];
        fs.zeta.data()[j] = log.zeta[i * n * n + j];
        fs.phi.data()[j] = log.phi[i * n * n + j];
    }
    return fs;
}

Mat f_matrix_at(const RunLog& log, std::size_t i) {
    const std::size_t r = log.r;
    if (!log.has_lsff) throw error("f_matrix_at: run has no covariance log");
    Mat F(r, r);
    for (std::size_t j = 0; j < r * r; ++j) F.data()[j] = log.F[i * r * r + j];
    return F;
}

} // namespace gpebo
