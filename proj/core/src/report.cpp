#include "gpebo/report.hpp"

#include "gpebo/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>

namespace gpebo {

namespace {

using nlohmann::json;

json metrics_json(const SignalMetrics& m) {
    json j;
    j["converged"] = m.converged;
    j["max_abs"] = m.max_abs;
    j["rms_final_window"] = m.rms_final_window;
    if (m.converged)
        j["time_to_tolerance"] = m.time_to_tolerance;
    else
        j["time_to_tolerance"] = nullptr;
    return j;
}

json build(const Scenario& sc, const RunLog& log, const EstimateLog& est,
           const std::vector<double>& theta_true, const ErrorSummary& summary,
           const AssumptionReport& assumptions, const PhiReport& phi) {
    json j;
    j["scenario"]["name"] = sc.name;
    j["scenario"]["dt"] = log.dt;
    j["scenario"]["t_final"] = log.times.empty() ? 0.0 : log.times.back();

    const std::size_t r = est.r;
    const std::size_t m = est.samples();
    std::vector<double> theta_final(r, 0.0);
    if (m > 0)
        for (std::size_t i = 0; i < r; ++i)
            theta_final[i] = est.theta_hat[(m - 1) * r + i];

    j["estimator"]["kind"] = sc.estimator.kind == EstimatorSpec::Kind::lsff ? "lsff" : "gradient";
    j["estimator"]["f_frozen"] = log.f_frozen;
    j["estimator"]["theta_hat_final"] = theta_final;
    j["estimator"]["theta_true"] = theta_true;

    j["assumptions"]["phi_sup_norm"] = assumptions.phi_sup_norm;
    j["assumptions"]["bibs_integral_sup"] = assumptions.bibs_integral_sup;
    j["assumptions"]["min_abs_det_phi"] = assumptions.min_abs_det_phi;
    j["assumptions"]["stable"] = assumptions.stable;

    j["fundamental_matrix"]["sup_spectral_norm"] = phi.sup_spectral_norm;
    j["fundamental_matrix"]["min_abs_det"] = phi.min_abs_det;
    j["fundamental_matrix"]["within_bound"] = phi.within_bound;

    j["metrics"]["rel_tol"] = summary.rel_tol;
    json params = json::array(), states = json::array();
    bool all = true;
    for (const auto& sm : summary.params) {
        params.push_back(metrics_json(sm));
        all = all && sm.converged;
    }
    for (const auto& sm : summary.states) {
        states.push_back(metrics_json(sm));
        all = all && sm.converged;
    }
    j["metrics"]["params"] = params;
    j["metrics"]["states"] = states;
    j["converged_all"] = all;
    return j;
}

std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

} // namespace

std::string report_json_text(const Scenario& sc, const RunLog& log, const EstimateLog& est,
                             const std::vector<double>& theta_true, const ErrorSummary& summary,
                             const AssumptionReport& assumptions, const PhiReport& phi) {
    return build(sc, log, est, theta_true, summary, assumptions, phi).dump(2) + "\n";
}

void write_report_json(const std::string& path, const Scenario& sc, const RunLog& log,
                       const EstimateLog& est, const std::vector<double>& theta_true,
                       const ErrorSummary& summary, const AssumptionReport& assumptions,
                       const PhiReport& phi) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw error("cannot open for writing: " + path);
    os << report_json_text(sc, log, est, theta_true, summary, assumptions, phi);
}

std::string report_summary_text(const Scenario& sc, const RunLog& log, const EstimateLog& est,
                                const std::vector<double>& theta_true, const ErrorSummary& summary,
                                const AssumptionReport& assumptions, const PhiReport& phi) {
    const std::size_t r = est.r;
    const std::size_t n = est.n;
    const std::size_t m = est.samples();

    std::string out;
    out += "scenario " + sc.name + ": dt=" + fmt(log.dt) +
           " t_final=" + fmt(log.times.empty() ? 0.0 : log.times.back()) + " estimator=" +
           (sc.estimator.kind == EstimatorSpec::Kind::lsff ? "lsff" : "gradient") + "\n";
    if (log.has_lsff)
        out += std::string("gain cap ") + (log.f_frozen ? "reached (F frozen)" : "not reached") +
               "\n";

    out += "theta_hat(T) = [";
    for (std::size_t i = 0; i < r; ++i) {
        if (i)
            out += ", ";
        out += fmt(m ? est.theta_hat[(m - 1) * r + i] : 0.0);
    }
    out += "]\ntheta_true   = [";
    for (std::size_t i = 0; i < r; ++i) {
        if (i)
            out += ", ";
        out += fmt(theta_true[i]);
    }
    out += "]\n";

    auto line = [&](const std::string& name, const SignalMetrics& sm) {
        out += "  " + name + ": max|err|=" + fmt(sm.max_abs) +
               " rms(last 10%)=" + fmt(sm.rms_final_window);
        if (sm.converged)
            out += " settled at t=" + fmt(sm.time_to_tolerance);
        else
            out += " never settled";
        out += "\n";
    };
    for (std::size_t i = 0; i < summary.params.size(); ++i)
        line("theta" + std::to_string(i + 1), summary.params[i]);
    for (std::size_t i = 0; i < n && i < summary.states.size(); ++i)
        line("x" + std::to_string(i + 1), summary.states[i]);

    out += "fundamental matrix: sup norm=" + fmt(phi.sup_spectral_norm) +
           " min|det|=" + fmt(phi.min_abs_det) + (phi.within_bound ? " (bounded)" : " (UNBOUNDED)") +
           "\n";
    out += "assumption monitors: c1=" + fmt(assumptions.phi_sup_norm) +
           " c2=" + fmt(assumptions.bibs_integral_sup) +
           (assumptions.stable ? " -> stable" : " -> NOT stable") + "\n";
    return out;
}

} // namespace gpebo
