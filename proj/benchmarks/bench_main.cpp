#include "gpebo/estimators.hpp"
#include "gpebo/filters.hpp"
#include "gpebo/mat.hpp"
#include "gpebo/runner.hpp"
#include "gpebo/scenario.hpp"
#include "gpebo/timefunc.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace gpebo;

namespace {

const Scenario& study() {
    static Scenario sc = load_scenario(SCENARIO_DIR "/paper_example.json");
    return sc;
}

void BM_ExprParse(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(parse_expr("5.2 + cos(2*t) + 0.5*sin(t)"));
}
BENCHMARK(BM_ExprParse);

void BM_ExprEval(benchmark::State& state) {
    TimeExpr e = parse_expr("5.2 + cos(2*t) + 0.5*sin(t)");
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_expr(e, t));
        t += 1e-3;
    }
}
BENCHMARK(BM_ExprEval);

void BM_PlantEvalA(benchmark::State& state) {
    const PlantSpec& plant = study().plant;
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(plant.eval_A(t));
        t += 1e-3;
    }
}
BENCHMARK(BM_PlantEvalA);

void BM_MatMul2(benchmark::State& state) {
    Mat a(2, 2, {1.0, -1.0, 5.0, -4.0});
    Mat b(2, 2, {0.3, 0.7, -0.2, 1.1});
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_MatMul2);

void BM_SymEig6(benchmark::State& state) {
    Mat g(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            g(i, j) = 1.0 / double(i + j + 1); // Hilbert: ill-conditioned PSD
    for (auto _ : state) benchmark::DoNotOptimize(sym_eigenvalues(g));
}
BENCHMARK(BM_SymEig6);

// The gain-cap test in the estimator hot loop; exercises the Frobenius
// short-circuits around the iterative bound.
void BM_SpecNormExceeds(benchmark::State& state) {
    Mat f(6, 6);
    for (std::size_t i = 0; i < 6; ++i) f(i, i) = 10.0 + double(i);
    f(0, 1) = f(1, 0) = 2.5;
    for (auto _ : state) benchmark::DoNotOptimize(spec_norm_exceeds(f, 15.0));
}
BENCHMARK(BM_SpecNormExceeds);

void BM_FilterRhs(benchmark::State& state) {
    const Scenario& sc = study();
    ObserverConfig cfg = ObserverConfig::derive(sc.plant, sc.observer_L);
    FilterState fs = FilterState::initial(2);
    fs.xi = {0.1, -0.2};
    double t = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(filter_rhs(cfg, t, fs, 3.0, 0.5));
        t += 1e-3;
    }
}
BENCHMARK(BM_FilterRhs);

// Whole joint pipeline (plant + cascade + estimator under RK4): cost per
// integration step, the quantity that sets full-run wall time.
void BM_JointStep(benchmark::State& state) {
    const Scenario& sc = study();
    RunOptions opts;
    opts.dt = 1e-5; // inside the gamma-limited stable step of the gain ODE
    opts.t_final = 0.01;
    opts.log_every = 100;
    for (auto _ : state) {
        RunLog log = run_simulation(sc, opts);
        benchmark::DoNotOptimize(log);
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * 1000); // steps per run
}
BENCHMARK(BM_JointStep);

} // namespace

BENCHMARK_MAIN();
