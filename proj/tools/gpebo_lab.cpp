#include "gpebo/csv_io.hpp"
#include "gpebo/errors.hpp"
#include "gpebo/report.hpp"
#include "gpebo/runner.hpp"
#include "gpebo/scenario.hpp"
#include "gpebo/svg_plot.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace gpebo;

namespace {

// --out wins, then GPEBO_LAB_OUT, then the per-command default.
fs::path resolve_out_dir(const std::string& flag, const fs::path& fallback) {
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv("GPEBO_LAB_OUT"); env && *env)
        return env;
    return fallback;
}

std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

int run_command(const std::string& scenario_path, double dt, double t_final,
                const std::string& out_flag) {
    Scenario sc = load_scenario(scenario_path);

    RunOptions opts;
    opts.mode = RunMode::full;
    opts.dt = dt;
    opts.t_final = t_final;
    RunLog log = run_simulation(sc, opts);

    const std::vector<double> theta_true = ThetaVector::true_of(sc.plant).to_flat();
    EstimateLog est = to_estimates(log, theta_true);
    TrajectoryLog traj = to_trajectory(log);
    ErrorSummary summary = error_metrics(traj, est, theta_true);

    ObserverConfig cfg = ObserverConfig::derive(sc.plant, sc.observer_L);
    const double horizon = log.times.empty() ? 0.0 : log.times.back();
    // The monitors integrate the (stable) observer dynamics only, so a coarse
    // grid suffices even when the main run needed a tiny step.
    AssumptionReport assumptions =
        assumption_monitors(cfg, sc.plant, std::max(log.dt, 1e-3), horizon);

    std::vector<Mat> phis;
    phis.reserve(log.samples());
    for (std::size_t s = 0; s < log.samples(); ++s) {
        Mat p(log.n, log.n);
        for (std::size_t i = 0; i < log.n * log.n; ++i)
            p.data()[i] = log.phi[s * log.n * log.n + i];
        phis.push_back(std::move(p));
    }
    PhiReport phi = fundamental_matrix_checks(phis);

    fs::path dir = resolve_out_dir(out_flag, ".");
    fs::create_directories(dir);
    auto resolve = [&](const std::string& p) {
        fs::path q(p);
        return q.is_absolute() ? q : dir / q;
    };
    fs::path csv_path = resolve(sc.outputs.csv);
    fs::path report_path = resolve(sc.outputs.report);

    write_run_csv(csv_path.string(), log, est, theta_true);
    fs::path reg_path = csv_path;
    reg_path.replace_filename(csv_path.stem().string() + "_regression.csv");
    write_regression_csv(reg_path.string(), log);
    write_report_json(report_path.string(), sc, log, est, theta_true, summary, assumptions, phi);

    std::cout << report_summary_text(sc, log, est, theta_true, summary, assumptions, phi);
    std::cout << "csv: " << csv_path.string() << "\nreport: " << report_path.string() << "\n";

    if (sc.outputs.plots) {
        CsvTable table = read_csv(csv_path.string());
        auto files = write_run_plots(csv_path.parent_path().string(), csv_path.stem().string(),
                                     table);
        std::cout << "plots: " << files.size() << " SVG files in "
                  << csv_path.parent_path().string() << "\n";
    }
    return 0;
}

int check_pe_command(const std::string& scenario_path, double delta, double stride) {
    Scenario sc = load_scenario(scenario_path);

    RunOptions opts;
    opts.mode = RunMode::filters_only;
    RunLog log = run_simulation(sc, opts);

    std::vector<RegressionSample> samples(log.samples());
    const std::size_t r = 3 * log.n;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        samples[s].t = log.times[s];
        samples[s].z = log.z[s];
        samples[s].psi.assign(log.psi.begin() + static_cast<long>(s * r),
                              log.psi.begin() + static_cast<long>((s + 1) * r));
    }

    std::vector<std::string> warnings;
    auto reports = excitation_scan(samples, delta, stride > 0 ? stride : delta, &warnings);
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << "\n";
    if (reports.empty()) {
        std::cerr << "error: window length " << fmt(delta)
                  << " s does not fit inside the simulated horizon; no windows to scan\n";
        return 2;
    }

    std::cout << "window_start,window_end,lambda_min,lambda_max\n";
    double worst = reports.front().lambda_min;
    for (const auto& rep : reports) {
        std::cout << fmt(rep.t0) << ',' << fmt(rep.t0 + rep.delta) << ',' << fmt(rep.lambda_min)
                  << ',' << fmt(rep.lambda_max) << "\n";
        worst = std::min(worst, rep.lambda_min);
    }
    std::cout << "min over windows of lambda_min = " << fmt(worst) << "\n";
    if (worst > 0.0) {
        std::cout << "excitation persists over every window\n";
        return 0;
    }
    std::cout << "excitation is NOT persistent\n";
    return 1;
}

int plot_command(const std::string& csv_path, const std::string& out_flag) {
    fs::path csv(csv_path);
    CsvTable table = read_csv(csv.string());
    fs::path dir = resolve_out_dir(out_flag, csv.parent_path().empty() ? fs::path(".")
                                                                       : csv.parent_path());
    fs::create_directories(dir);
    auto files = write_run_plots(dir.string(), csv.stem().string(), table);
    for (const auto& f : files)
        std::cout << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gpebo-lab: simulate a linear time-varying plant, run the observer filter "
                 "cascade, and identify its parameters online"};
    app.require_subcommand(1);

    std::string scenario_path, csv_path, out_dir;
    double dt = 0.0, t_final = 0.0, delta = 0.0, stride = 0.0;

    auto* run = app.add_subcommand("run", "simulate a scenario; write CSV, report, and plots");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--dt", dt, "override integration step [s]");
    run->add_option("--t-final", t_final, "override horizon [s]");
    run->add_option("--out", out_dir, "output directory (default: GPEBO_LAB_OUT or .)");

    auto* pe = app.add_subcommand("check-pe", "scan excitation windows over a filters-only run");
    pe->add_option("scenario", scenario_path, "scenario JSON file")->required();
    pe->add_option("--delta", delta, "window length [s]")->required();
    pe->add_option("--stride", stride, "window spacing [s] (default: delta)");

    auto* plot = app.add_subcommand("plot", "render SVG figures from a run CSV");
    plot->add_option("csv", csv_path, "CSV written by run")->required();
    plot->add_option("--out", out_dir, "output directory (default: alongside the CSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run)
            return run_command(scenario_path, dt, t_final, out_dir);
        if (*pe)
            return check_pe_command(scenario_path, delta, stride);
        return plot_command(csv_path, out_dir);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const divergence_error& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
