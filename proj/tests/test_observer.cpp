#include "gpebo/errors.hpp"
#include "gpebo/observer.hpp"
#include "gpebo/runner.hpp"
#include "study_system.hpp"

#include <doctest.h>

#include <cmath>

using namespace gpebo;

TEST_CASE("reconstruction identities at the initial state") {
    FilterState fs = FilterState::initial(2);
    PlantSpec p = study_plant();
    ThetaVector theta = ThetaVector::true_of(p);

    // exact parameters: x_hat(0) = xi - phi e0 = -(-x0) = x0
    auto xh = reconstruct_state(fs, theta);
    CHECK(xh[0] == doctest::Approx(3.0));
    CHECK(xh[1] == doctest::Approx(-2.0));

    // zero parameters: x_hat = xi
    ThetaVector zero = ThetaVector::from_flat(std::vector<double>(6, 0.0));
    fs.xi = {0.7, -0.3};
    auto xh0 = reconstruct_state(fs, zero);
    CHECK(xh0[0] == 0.7);
    CHECK(xh0[1] == -0.3);
}

TEST_CASE("exact parameters reconstruct the trajectory") {
    Scenario sc = study_scenario();
    RunOptions opts;
    opts.mode = RunMode::filters_only;
    RunLog log = run_simulation(sc, opts);
    std::vector<double> theta = ThetaVector::true_of(sc.plant).to_flat();
    std::vector<double> xh = reconstruct_series(log, theta);
    double worst = 0.0;
    for (std::size_t i = 0; i < xh.size(); ++i)
        worst = std::max(worst, std::fabs(xh[i] - log.x[i]));
    CHECK(worst < 1e-5);
}

TEST_CASE("stability monitors on a closed-form observer") {
    // A0 = -I: phi = e^{-t} I, and with b = [1,0] the input-to-state integral
    // is 1 - e^{-t}
    PlantSpec p;
    p.n = 2;
    p.A = {parse_expr("-1"), parse_expr("0"), parse_expr("0"), parse_expr("-1")};
    p.C = {parse_expr("1"), parse_expr("0")};
    p.k_true = {0.0, 0.0};
    p.b_true = {1.0, 0.0};
    p.x0 = {0.0, 0.0};
    p.input = parse_expr("0");
    ObserverConfig cfg = ObserverConfig::derive(p, {parse_expr("0"), parse_expr("0")});

    AssumptionReport rep = assumption_monitors(cfg, p, 1e-2, 50.0);
    CHECK(rep.stable);
    CHECK(rep.phi_sup_norm == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.bibs_integral_sup == doctest::Approx(1.0 - std::exp(-50.0)).epsilon(2e-3));
}

TEST_CASE("stability monitors on the trivial flow") {
    // A0 = 0, b = 0: phi = I forever and nothing accumulates
    PlantSpec p;
    p.n = 2;
    p.A = {parse_expr("0"), parse_expr("0"), parse_expr("0"), parse_expr("0")};
    p.C = {parse_expr("1"), parse_expr("0")};
    p.k_true = {0.0, 0.0};
    p.b_true = {0.0, 0.0};
    p.x0 = {0.0, 0.0};
    p.input = parse_expr("0");
    ObserverConfig cfg = ObserverConfig::derive(p, {parse_expr("0"), parse_expr("0")});
    AssumptionReport rep = assumption_monitors(cfg, p, 1e-2, 10.0);
    CHECK(rep.stable);
    CHECK(rep.phi_sup_norm == doctest::Approx(1.0));
    CHECK(rep.bibs_integral_sup == doctest::Approx(0.0));
    CHECK(rep.min_abs_det_phi == doctest::Approx(1.0));
}

TEST_CASE("unstable observer dynamics are flagged") {
    PlantSpec p;
    p.n = 2;
    p.A = {parse_expr("1"), parse_expr("0"), parse_expr("0"), parse_expr("1")};
    p.C = {parse_expr("1"), parse_expr("0")};
    p.k_true = {0.0, 0.0};
    p.b_true = {0.0, 0.0};
    p.x0 = {0.0, 0.0};
    p.input = parse_expr("0");
    ObserverConfig cfg = ObserverConfig::derive(p, {parse_expr("0"), parse_expr("0")});
    AssumptionReport rep = assumption_monitors(cfg, p, 1e-2, 10.0);
    CHECK_FALSE(rep.stable); // e^{10} > 100
    CHECK(rep.phi_sup_norm > 100.0);
}

TEST_CASE("study-system monitors match the long-run measurements") {
    PlantSpec p = study_plant();
    ObserverConfig cfg = ObserverConfig::derive(p, study_gain());
    AssumptionReport rep = assumption_monitors(cfg, p, 1e-3, 50.0);
    CHECK(rep.stable);
    CHECK(rep.phi_sup_norm == doctest::Approx(4.59634).epsilon(1e-3));
    CHECK(rep.bibs_integral_sup < 1000.0);
    CHECK(rep.min_abs_det_phi >= 0.0);
}

namespace {

EstimateLog constant_error_log(double offset, std::size_t samples) {
    EstimateLog est;
    est.n = 2;
    est.r = 6;
    for (std::size_t s = 0; s < samples; ++s) {
        est.times.push_back(static_cast<double>(s));
        for (std::size_t i = 0; i < 2; ++i) {
            est.x_hat.push_back(offset);
            est.state_err.push_back(offset);
        }
        for (std::size_t i = 0; i < 6; ++i) {
            est.theta_hat.push_back(offset);
            est.param_err.push_back(offset);
        }
    }
    return est;
}

TrajectoryLog zero_traj(std::size_t samples) {
    TrajectoryLog traj;
    traj.n = 2;
    traj.dt = 1.0;
    for (std::size_t s = 0; s < samples; ++s) {
        traj.times.push_back(static_cast<double>(s));
        traj.x.push_back(0.0);
        traj.x.push_back(0.0);
        traj.y.push_back(0.0);
        traj.u.push_back(0.0);
    }
    return traj;
}

} // namespace

TEST_CASE("error metrics: immediate convergence and sentinel") {
    std::vector<double> theta_true(6, 0.0);

    EstimateLog inside = constant_error_log(0.01, 11); // |err| < 0.05 (1+0) everywhere
    ErrorSummary s1 = error_metrics(zero_traj(11), inside, theta_true);
    for (const auto& m : s1.params) {
        CHECK(m.converged);
        CHECK(m.time_to_tolerance == 0.0); // never outside: settled from the start
        CHECK(m.max_abs == doctest::Approx(0.01));
        CHECK(m.rms_final_window == doctest::Approx(0.01));
    }

    EstimateLog outside = constant_error_log(10.0, 11);
    ErrorSummary s2 = error_metrics(zero_traj(11), outside, theta_true);
    for (const auto& m : s2.params) {
        CHECK_FALSE(m.converged);
        CHECK(m.time_to_tolerance == 10.0); // horizon sentinel
    }
    for (const auto& m : s2.states) CHECK_FALSE(m.converged);
}

TEST_CASE("error metrics: settling time is the first stay-inside instant") {
    std::vector<double> theta_true(6, 0.0);
    EstimateLog est = constant_error_log(0.0, 11);
    // param 0 leaves the band until t = 3 inclusive, then returns for good
    for (std::size_t s = 0; s <= 3; ++s) est.param_err[s * 6 + 0] = 1.0;
    ErrorSummary sum = error_metrics(zero_traj(11), est, theta_true);
    CHECK(sum.params[0].converged);
    CHECK(sum.params[0].time_to_tolerance == 4.0);
    CHECK(sum.params[0].max_abs == doctest::Approx(1.0));

    // the state band widens with the true trajectory: |err| = 0.08 converges
    // only where 0.05 (1 + |x|) >= 0.08
    TrajectoryLog traj = zero_traj(11);
    for (std::size_t s = 0; s < 5; ++s) traj.x[s * 2 + 0] = 0.0; // band 0.05
    for (std::size_t s = 5; s < 11; ++s) traj.x[s * 2 + 0] = 1.0; // band 0.10
    EstimateLog est2 = constant_error_log(0.0, 11);
    for (std::size_t s = 0; s < 11; ++s) est2.state_err[s * 2 + 0] = 0.08;
    ErrorSummary sum2 = error_metrics(traj, est2, theta_true);
    CHECK(sum2.states[0].converged);
    CHECK(sum2.states[0].time_to_tolerance == 5.0);
}
