#pragma once

#include "gpebo/observer.hpp"
#include "gpebo/runner.hpp"
#include "gpebo/scenario.hpp"

#include <string>
#include <vector>

namespace gpebo {

// Keys are emitted in sorted order, so the file is byte-stable across runs.
// time_to_tolerance is null for signals that never settle.
std::string report_json_text(const Scenario& sc, const RunLog& log, const EstimateLog& est,
                             const std::vector<double>& theta_true, const ErrorSummary& summary,
                             const AssumptionReport& assumptions, const PhiReport& phi);

void write_report_json(const std::string& path, const Scenario& sc, const RunLog& log,
                       const EstimateLog& est, const std::vector<double>& theta_true,
                       const ErrorSummary& summary, const AssumptionReport& assumptions,
                       const PhiReport& phi);

// Human-readable digest of the same content, one signal per line.
std::string report_summary_text(const Scenario& sc, const RunLog& log, const EstimateLog& est,
                                const std::vector<double>& theta_true, const ErrorSummary& summary,
                                const AssumptionReport& assumptions, const PhiReport& phi);

} // namespace gpebo
