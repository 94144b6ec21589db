// Acceptance gate for the workbench: each numbered criterion prints exactly one
// [PASS]/[FAIL] line with the measured quantity, and the process exits nonzero
// if any criterion failed. Criterion 4 integrates the bundled study at its
// stability-limited step (2e9 RK4 steps, roughly twenty minutes); it runs last
// so the quick criteria report first.

#include "gpebo/csv_io.hpp"
#include "gpebo/errors.hpp"
#include "gpebo/estimators.hpp"
#include "gpebo/filters.hpp"
#include "gpebo/mat.hpp"
#include "gpebo/ode.hpp"
#include "gpebo/observer.hpp"
#include "gpebo/runner.hpp"
#include "gpebo/scenario.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

using namespace gpebo;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void line(int id, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

// ids lists every criterion the body covers, so a thrown run still yields one
// line per criterion.
void guard(std::initializer_list<int> ids, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        for (int id : ids) line(id, false, std::string("unexpected exception: ") + e.what());
    }
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int exit_code(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is.good()) return "<unreadable:" + p.string() + ">";
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

const std::vector<double> kThetaTrue{-3.0, 2.0, -1.0, -3.0, 1.0, 2.0};

// Criteria 1-3 share one filters-only pass over the bundled study at dt = 1e-3,
// logging every step so the sup norms see all 50k samples.
void criteria_1_to_3() {
    Scenario sc = load_scenario(SCENARIO_DIR "/paper_example.json");
    std::vector<double> theta_true = ThetaVector::true_of(sc.plant).to_flat();
    if (theta_true != kThetaTrue) {
        std::string msg = "bundled scenario parameter vector drifted: [";
        for (double v : theta_true) msg += num(v) + " ";
        msg += "]";
        line(1, false, msg);
        line(2, false, "skipped: scenario precondition failed");
        line(3, false, "skipped: scenario precondition failed");
        return;
    }

    RunOptions opts;
    opts.mode = RunMode::filters_only;
    opts.log_every = 1;
    RunLog log = run_simulation(sc, opts);

    double worst_identity = 0.0;
    for (std::size_t i = 0; i < log.samples(); ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < 6; ++j) pred += log.psi[i * 6 + j] * theta_true[j];
        worst_identity = std::max(worst_identity, std::abs(log.z[i] - pred));
    }
    line(1, worst_identity < 1e-5,
         "regression identity max|z - psi.theta| = " + num(worst_identity) + " (tol 1e-5)");

    const std::vector<double> e0{-sc.plant.x0[0], -sc.plant.x0[1]};
    double worst_flow = 0.0;
    for (std::size_t i = 0; i < log.samples(); ++i) {
        FilterState fsamp = filter_state_at(log, i);
        Mat pe0 = fsamp.phi * Mat::column(e0);
        for (std::size_t a = 0; a < 2; ++a) {
            double e = fsamp.xi[a] - log.x[i * 2 + a];
            for (std::size_t b = 0; b < 2; ++b)
                e += fsamp.eta(a, b) * sc.plant.k_true[b] + fsamp.zeta(a, b) * sc.plant.b_true[b];
            worst_flow = std::max(worst_flow, std::abs(e - pe0(a, 0)));
        }
    }
    line(2, worst_flow < 1e-5,
         "error flow max|e - phi.e0| = " + num(worst_flow) + " (tol 1e-5)");

    std::vector<double> xhat = reconstruct_series(log, theta_true);
    double worst_rec = 0.0;
    for (std::size_t i = 0; i < xhat.size(); ++i)
        worst_rec = std::max(worst_rec, std::abs(xhat[i] - log.x[i]));
    line(3, worst_rec < 1e-5,
         "exact-parameter reconstruction max|xhat - x| = " + num(worst_rec) + " (tol 1e-5)");
}

// Scalar closed forms: with psi = 1, z = 0, theta_hat(0) = 1 the least-squares
// estimator with gamma = 1, beta = 0, F(0) = 1 gives F(t) = theta_hat(t) =
// 1/(1+t); the gradient estimator with gamma = 2 gives e^{-2t}.
void criterion_5() {
    LsFfConfig cfg;
    cfg.gamma = 1.0;
    cfg.beta = 0.0;
    cfg.f0 = 1.0;
    cfg.M = 1e12;

    EstimatorState st;
    st.theta_hat = {1.0};
    st.F = Mat::identity(1);

    RegressionSample sample;
    sample.z = 0.0;
    sample.psi = {1.0};

    auto rhs = [&](double t, const double* s, double* out) {
        (void)t;
        EstimatorState cur;
        cur.theta_hat = {s[0]};
        cur.F = Mat::identity(1);
        cur.F(0, 0) = s[1];
        EstimatorState d = lsff_rhs(cfg, cur, sample);
        out[0] = d.theta_hat[0];
        out[1] = d.F(0, 0);
    };

    const double dt = 1e-4;
    double state[2] = {st.theta_hat[0], st.F(0, 0)};
    double k1[2], k2[2], k3[2], k4[2], tmp[2];
    double t = 0.0;
    double worst_ls = 0.0;
    for (int step = 0; step < 100000; ++step) {
        rk4_step_inplace(rhs, t, dt, state, 2, k1, k2, k3, k4, tmp);
        t = (step + 1) * dt;
        if (step == 9999 || step == 49999 || step == 99999) {
            double exact = 1.0 / (1.0 + t);
            worst_ls = std::max(worst_ls, std::abs(state[0] - exact));
            worst_ls = std::max(worst_ls, std::abs(state[1] - exact));
        }
    }

    auto grad = [&](double tt, const double* s, double* out) {
        (void)tt;
        std::vector<double> d = gradient_rhs(2.0, {s[0]}, sample);
        out[0] = d[0];
    };
    double gs[1] = {1.0};
    double g1[1], g2[1], g3[1], g4[1], gt[1];
    t = 0.0;
    double worst_grad = 0.0;
    for (int step = 0; step < 100000; ++step) {
        rk4_step_inplace(grad, t, dt, gs, 1, g1, g2, g3, g4, gt);
        t = (step + 1) * dt;
        if (step == 9999 || step == 49999 || step == 99999)
            worst_grad = std::max(worst_grad, std::abs(gs[0] - std::exp(-2.0 * t)));
    }

    bool ok = worst_ls < 1e-6 && worst_grad < 1e-6;
    line(5, ok,
         "scalar closed forms: least-squares err " + num(worst_ls) + ", gradient err " +
             num(worst_grad) + " at t in {1,5,10} (tol 1e-6)");
}

void criterion_6() {
    std::string tool = TOOL_PATH;
    int rc_excited = exit_code(tool + " check-pe " SCENARIO_DIR "/paper_example.json --delta 10 >/dev/null 2>&1");
    int rc_flat = exit_code(tool + " check-pe " SCENARIO_DIR "/unexcited.json --delta 2 >/dev/null 2>&1");
    bool ok = rc_excited == 0 && rc_flat == 1;
    line(6, ok,
         "excitation scan exits: study " + std::to_string(rc_excited) + " (want 0), unexcited " +
             std::to_string(rc_flat) + " (want 1)");
}

void criterion_7() {
    OdeSystem sys;
    sys.dimension = 1;
    sys.rhs = [](double, const double* s, double* out) { out[0] = s[0]; };

    auto global_err = [&](double dt) {
        std::vector<double> s{1.0};
        long steps = std::lround(1.0 / dt);
        for (long i = 0; i < steps; ++i) s = rk4_step(sys, i * dt, s, dt);
        return std::abs(s[0] - std::exp(1.0));
    };
    double factor = global_err(0.1) / global_err(0.05);
    line(7, factor >= 12.0 && factor <= 20.0,
         "RK4 halving shrinks global error by " + num(factor) + " (want 12..20)");
}

void criterion_8() {
    fs::path base = fs::temp_directory_path() / "gpebo_acceptance_det";
    fs::remove_all(base);
    fs::create_directories(base / "a");
    fs::create_directories(base / "b");

    std::string tool = TOOL_PATH;
    std::string args = " run " SCENARIO_DIR "/paper_example.json --dt 1e-5 --t-final 1 --out ";
    int rc_a = exit_code(tool + args + (base / "a").string() + " >/dev/null 2>&1");
    int rc_b = exit_code(tool + args + (base / "b").string() + " >/dev/null 2>&1");

    bool files_equal = true;
    for (const char* name : {"paper_example.csv", "paper_example_regression.csv",
                             "paper_example_report.json"})
        if (slurp(base / "a" / name) != slurp(base / "b" / name)) files_equal = false;

    bool ok = rc_a == 0 && rc_b == 0 && files_equal;
    line(8, ok,
         std::string("repeated runs byte-identical: ") + (files_equal ? "yes" : "NO") +
             " (exits " + std::to_string(rc_a) + "," + std::to_string(rc_b) + ")");
}

// Settling times from the first full-resolution run of this implementation,
// pinned at +-20% as a regression guard. Settling time is the first logged
// sample inside the band that never leaves it again (the convention of
// error_metrics). A negative pin marks a signal that did not settle.
struct Pin {
    const char* name;
    double t_settle;
};
const Pin kPins[8] = {
    {"theta1", 0.002}, {"theta2", -1.0}, {"theta3", 2.450}, {"theta4", 2.645},
    {"theta5", 3.739}, {"theta6", 3.862}, {"x1", 0.002},    {"x2", 2.679},
};

void criterion_4() {
    std::fprintf(stderr,
                 "criterion 4: integrating the full study at dt = 2.5e-8 "
                 "(2e9 steps, expect ~20 minutes)...\n");
    Scenario sc = load_scenario(SCENARIO_DIR "/paper_example_full.json");
    RunOptions opts;
    RunLog log = run_simulation(sc, opts);

    std::vector<double> theta_true = ThetaVector::true_of(sc.plant).to_flat();
    TrajectoryLog traj = to_trajectory(log);
    EstimateLog est = to_estimates(log, theta_true);
    ErrorSummary summary = error_metrics(traj, est, theta_true);

    std::vector<const SignalMetrics*> signals;
    for (const auto& m : summary.params) signals.push_back(&m);
    for (const auto& m : summary.states) signals.push_back(&m);

    std::size_t last = est.samples() - 1;
    std::string unsettled;
    std::string off_pin;
    for (std::size_t i = 0; i < signals.size(); ++i) {
        const SignalMetrics& m = *signals[i];
        double final_err = i < 6 ? std::abs(est.param_err[last * 6 + i])
                                 : std::abs(est.state_err[last * 2 + (i - 6)]);
        std::string detail = std::string("    ") + kPins[i].name + ": ";
        if (m.converged) {
            detail += "settled at t = " + num(m.time_to_tolerance);
            if (kPins[i].t_settle > 0.0) {
                double lo = 0.8 * kPins[i].t_settle;
                double hi = 1.2 * kPins[i].t_settle;
                bool inside = m.time_to_tolerance >= lo && m.time_to_tolerance <= hi;
                detail += inside ? " (pin " + num(kPins[i].t_settle) + " ok)"
                                 : " (OUTSIDE pin " + num(kPins[i].t_settle) + " +-20%)";
                if (!inside) off_pin += std::string(off_pin.empty() ? "" : ", ") + kPins[i].name;
            } else {
                detail += " (no pin: did not settle on the reference run)";
            }
        } else {
            detail += "never settled, |err(T)| = " + num(final_err);
            if (!unsettled.empty()) unsettled += ", ";
            unsettled += kPins[i].name;
        }
        detail += ", max|err| = " + num(m.max_abs);
        std::fprintf(stdout, "%s\n", detail.c_str());
    }

    bool ok = unsettled.empty() && off_pin.empty();
    std::string msg;
    if (ok) {
        msg = "all 8 error signals settle inside the 5% band and their pinned windows";
    } else {
        if (!unsettled.empty()) msg += unsettled + " never reached the 5% band";
        if (!off_pin.empty()) {
            if (!msg.empty()) msg += "; ";
            msg += off_pin + " settled outside the pinned window";
        }
    }
    line(4, ok, msg);
}

} // namespace

// With no arguments every criterion runs; numeric arguments select a subset
// (development nicety: criterion 4 integrates for ~20 minutes).
int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    auto want = [&](std::initializer_list<int> ids) {
        if (wanted.empty()) return true;
        for (int id : ids)
            for (int w : wanted)
                if (w == id) return true;
        return false;
    };

    std::printf("acceptance (study scenarios in %s)\n", SCENARIO_DIR);
    int total = 0;
    auto run = [&](std::initializer_list<int> ids, const std::function<void()>& body) {
        if (!want(ids)) return;
        total += int(ids.size());
        guard(ids, body);
    };
    run({1, 2, 3}, criteria_1_to_3);
    run({5}, criterion_5);
    run({6}, criterion_6);
    run({7}, criterion_7);
    run({8}, criterion_8);
    run({4}, criterion_4);
    std::printf("acceptance: %d/%d criteria passed\n", total - g_failures, total);
    return g_failures == 0 ? 0 : 1;
}
