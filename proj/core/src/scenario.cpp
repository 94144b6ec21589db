#include "gpebo/scenario.hpp"

#include "gpebo/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace gpebo {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const char* where, std::initializer_list<const char*> keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw config_error(std::string("scenario: unknown key '") + it.key() + "' in " +
                               where);
    }
}

const json& require(const json& obj, const char* where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw config_error(std::string("scenario: missing key '") + key + "' in " + where);
    return *it;
}

double number_at(const json& v, const std::string& field) {
    if (!v.is_number())
        throw config_error("scenario: " + field + " must be a number");
    return v.get<double>();
}

TimeExpr expr_at(const json& v, const std::string& field) {
    if (v.is_number()) {
        TimeExpr e;
        e.terms.push_back(Term::make_const(v.get<double>()));
        return e;
    }
    if (!v.is_string())
        throw config_error("scenario: " + field + " must be an expression string or number");
    try {
        return parse_expr(v.get<std::string>());
    } catch (const parse_error& pe) {
        throw config_error("scenario: " + field + ": " + pe.what());
    }
}

std::vector<double> number_vec(const json& v, const std::string& field, std::size_t want) {
    if (!v.is_array() || v.size() != want)
        throw config_error("scenario: " + field + " must be an array of " + std::to_string(want) +
                           " numbers");
    std::vector<double> out;
    out.reserve(want);
    for (std::size_t i = 0; i < want; ++i)
        out.push_back(number_at(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<TimeExpr> expr_vec(const json& v, const std::string& field, std::size_t want) {
    if (!v.is_array() || v.size() != want)
        throw config_error("scenario: " + field + " must be an array of " + std::to_string(want) +
                           " entries");
    std::vector<TimeExpr> out;
    out.reserve(want);
    for (std::size_t i = 0; i < want; ++i)
        out.push_back(expr_at(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

PlantSpec parse_plant(const json& p) {
    reject_unknown(p, "plant", {"n", "A", "C", "k", "b", "x0", "u", "noise"});
    PlantSpec plant;
    const json& jn = require(p, "plant", "n");
    if (!jn.is_number_unsigned() || jn.get<std::size_t>() < 1)
        throw config_error("scenario: plant.n must be a positive integer");
    plant.n = jn.get<std::size_t>();
    const std::size_t n = plant.n;

    const json& ja = require(p, "plant", "A");
    if (!ja.is_array() || ja.size() != n)
        throw config_error("scenario: plant.A must be an array of " + std::to_string(n) +
                           " rows");
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<TimeExpr> row = expr_vec(ja[i], "plant.A[" + std::to_string(i) + "]", n);
        plant.A.insert(plant.A.end(), row.begin(), row.end());
    }
    plant.C = expr_vec(require(p, "plant", "C"), "plant.C", n);
    plant.k_true = number_vec(require(p, "plant", "k"), "plant.k", n);
    plant.b_true = number_vec(require(p, "plant", "b"), "plant.b", n);
    plant.x0 = number_vec(require(p, "plant", "x0"), "plant.x0", n);
    plant.input = expr_at(require(p, "plant", "u"), "plant.u");

    if (auto it = p.find("noise"); it != p.end()) {
        reject_unknown(*it, "plant.noise", {"std", "seed"});
        plant.noise_std = number_at(require(*it, "plant.noise", "std"), "plant.noise.std");
        if (auto is = it->find("seed"); is != it->end()) {
            if (!is->is_number_unsigned())
                throw config_error("scenario: plant.noise.seed must be a non-negative integer");
            plant.noise_seed = is->get<std::uint64_t>();
        }
    }
    return plant;
}

EstimatorSpec parse_estimator(const json& e, std::size_t r) {
    EstimatorSpec est;
    const json& jk = require(e, "estimator", "kind");
    const std::string kind = jk.is_string() ? jk.get<std::string>() : std::string();
    if (kind == "lsff") {
        est.kind = EstimatorSpec::Kind::lsff;
        reject_unknown(e, "estimator", {"kind", "gamma", "beta", "f0", "M", "theta0"});
        est.lsff.gamma = number_at(require(e, "estimator", "gamma"), "estimator.gamma");
        est.lsff.beta = number_at(require(e, "estimator", "beta"), "estimator.beta");
        est.lsff.f0 = number_at(require(e, "estimator", "f0"), "estimator.f0");
        est.lsff.M = number_at(require(e, "estimator", "M"), "estimator.M");
        if (auto it = e.find("theta0"); it != e.end())
            est.theta0 = number_vec(*it, "estimator.theta0", r);
        est.lsff.theta0 = est.theta0;
        est.lsff.validate(r);
    } else if (kind == "gradient") {
        est.kind = EstimatorSpec::Kind::gradient;
        reject_unknown(e, "estimator", {"kind", "gamma", "theta0"});
        est.gradient_gamma = number_at(require(e, "estimator", "gamma"), "estimator.gamma");
        if (!(est.gradient_gamma > 0.0))
            throw config_error("scenario: estimator.gamma must be > 0");
        if (auto it = e.find("theta0"); it != e.end())
            est.theta0 = number_vec(*it, "estimator.theta0", r);
    } else {
        throw config_error("scenario: estimator.kind must be one of lsff|gradient, got '" + kind +
                           "'");
    }
    return est;
}

} // namespace

void Scenario::validate() const {
    if (name.empty()) throw config_error("scenario: name must be non-empty");
    plant.validate();
    if (observer_L.size() != plant.n)
        throw config_error("scenario: observer.L must have " + std::to_string(plant.n) +
                           " entries");
    if (estimator.kind == EstimatorSpec::Kind::lsff)
        estimator.lsff.validate(3 * plant.n);
    else if (!(estimator.gradient_gamma > 0.0))
        throw config_error("scenario: estimator.gamma must be > 0");
    if (!estimator.theta0.empty() && estimator.theta0.size() != 3 * plant.n)
        throw config_error("scenario: estimator.theta0 must have " +
                           std::to_string(3 * plant.n) + " entries");
    if (!(sim.dt > 0.0)) throw config_error("scenario: sim.dt must be > 0");
    if (!(sim.t_final > 0.0)) throw config_error("scenario: sim.t_final must be > 0");
    if (sim.t_final < sim.dt)
        throw config_error("scenario: sim.t_final must be >= sim.dt");
}

Scenario parse_scenario_text(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& pe) {
        throw config_error(std::string("scenario: invalid JSON: ") + pe.what());
    }
    if (!root.is_object()) throw config_error("scenario: top level must be an object");
    reject_unknown(root, "scenario", {"name", "plant", "observer", "estimator", "sim", "outputs"});

    Scenario sc;
    const json& jn = require(root, "scenario", "name");
    if (!jn.is_string()) throw config_error("scenario: name must be a string");
    sc.name = jn.get<std::string>();

    sc.plant = parse_plant(require(root, "scenario", "plant"));

    const json& jo = require(root, "scenario", "observer");
    reject_unknown(jo, "observer", {"L"});
    sc.observer_L = expr_vec(require(jo, "observer", "L"), "observer.L", sc.plant.n);

    sc.estimator = parse_estimator(require(root, "scenario", "estimator"), 3 * sc.plant.n);

    const json& js = require(root, "scenario", "sim");
    reject_unknown(js, "sim", {"dt", "t_final"});
    sc.sim.dt = number_at(require(js, "sim", "dt"), "sim.dt");
    sc.sim.t_final = number_at(require(js, "sim", "t_final"), "sim.t_final");

    sc.outputs.csv = sc.name + ".csv";
    sc.outputs.report = sc.name + "_report.json";
    if (auto it = root.find("outputs"); it != root.end()) {
        reject_unknown(*it, "outputs", {"csv", "plots", "report"});
        if (auto ic = it->find("csv"); ic != it->end()) {
            if (!ic->is_string()) throw config_error("scenario: outputs.csv must be a string");
            sc.outputs.csv = ic->get<std::string>();
        }
        if (auto ip = it->find("plots"); ip != it->end()) {
            if (!ip->is_boolean()) throw config_error("scenario: outputs.plots must be a boolean");
            sc.outputs.plots = ip->get<bool>();
        }
        if (auto ir = it->find("report"); ir != it->end()) {
            if (!ir->is_string()) throw config_error("scenario: outputs.report must be a string");
            sc.outputs.report = ir->get<std::string>();
        }
    }

    sc.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("scenario: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

} // namespace gpebo
