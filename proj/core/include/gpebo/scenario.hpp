#pragma once

#include "gpebo/estimators.hpp"
#include "gpebo/plant.hpp"
#include "gpebo/timefunc.hpp"

#include <string>
#include <vector>

namespace gpebo {

struct EstimatorSpec {
    enum class Kind { lsff, gradient };
    Kind kind = Kind::lsff;
    LsFfConfig lsff;              // kind == lsff
    double gradient_gamma = 0.0;  // kind == gradient
    std::vector<double> theta0;   // empty means zeros
};

struct SimSpec {
    double dt = 0.0;
    double t_final = 0.0;
};

struct OutputSpec {
    std::string csv;    // defaults to <name>.csv
    bool plots = true;
    std::string report; // defaults to <name>_report.json
};

struct Scenario {
    std::string name;
    PlantSpec plant;
    std::vector<TimeExpr> observer_L;
    EstimatorSpec estimator;
    SimSpec sim;
    OutputSpec outputs;

    void validate() const; // throws config_error naming the offending field
};

// Strict JSON: unknown keys are rejected by name, expression entries may be
// strings in the timefunc grammar or plain numbers.
Scenario parse_scenario_text(const std::string& json_text);
Scenario load_scenario(const std::string& path);

} // namespace gpebo
