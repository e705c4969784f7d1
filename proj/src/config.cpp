#include "bso/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace bso::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* envelope_name(EnvelopeKind k) {
    return k == EnvelopeKind::Constant ? "constant" : "adiabatic_switch";
}

const char* format_name(OutputFormat f) {
    return f == OutputFormat::Json ? "json" : "csv";
}

bool needs_t_end(Experiment e) {
    return e == Experiment::Trajectory || e == Experiment::BsoResidual
           || e == Experiment::FloquetCompare;
}

// Analytical formulas (pi/2-pulse law, sideband prediction, closed form)
// are evaluated for everything except the plain trajectory.
bool analytical(Experiment e) { return e != Experiment::Trajectory; }

} // namespace

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::Trajectory: return "trajectory";
        case Experiment::BsoResidual: return "bso_residual";
        case Experiment::PhaseSweep: return "phase_sweep";
        case Experiment::RotationError: return "rotation_error";
        case Experiment::FloquetCompare: return "floquet_compare";
    }
    return "trajectory";
}

bool has_errors(const std::vector<Violation>& violations) {
    for (const auto& v : violations) {
        if (v.severity == Severity::Error) return true;
    }
    return false;
}

std::vector<Violation> validate(const RunConfig& cfg) {
    std::vector<Violation> out;
    auto error = [&out](const std::string& field, const std::string& msg) {
        out.push_back({Severity::Error, field, msg});
    };
    auto warning = [&out](const std::string& field, const std::string& msg) {
        out.push_back({Severity::Warning, field, msg});
    };

    const auto& f = cfg.field;
    if (!(f.g0_max >= 0.0) || !std::isfinite(f.g0_max))
        error("g0_max", "must be finite and >= 0, got " + fmt(f.g0_max));
    if (!(f.omega > 0.0) || !std::isfinite(f.omega))
        error("omega", "must be finite and > 0, got " + fmt(f.omega));
    if (!std::isfinite(f.phi)) error("phi", "must be finite");
    if (!(f.tau_sw > 0.0) || !std::isfinite(f.tau_sw))
        error("tau_sw", "must be finite and > 0, got " + fmt(f.tau_sw));
    if (!(f.epsilon > 0.0) || !std::isfinite(f.epsilon))
        error("epsilon", "must be finite and > 0, got " + fmt(f.epsilon));

    if (f.omega > 0.0 && !(f.eta0() < 0.25)) {
        error("g0_max", "eta0 = g0_max/(4 omega) = " + fmt(f.eta0())
                            + " violates the perturbative bound eta0 < 0.25");
    }
    if (f.omega > 0.0 && analytical(cfg.experiment) && !f.resonant()) {
        error("epsilon", "experiment '" + experiment_name(cfg.experiment)
                             + "' evaluates resonant formulas; epsilon must equal omega");
    }
    if (f.omega > 0.0 && f.tau_sw > 0.0 && cfg.envelope.kind == EnvelopeKind::AdiabaticSwitch) {
        double t_min = 10.0 / f.omega;
        if (f.g0_max > 0.0) t_min = std::max(t_min, 10.0 / f.g0_max);
        if (f.tau_sw < t_min) {
            warning("tau_sw", "switching is not adiabatic: tau_sw = " + fmt(f.tau_sw)
                                  + " < 10 * max(1/omega, 1/g0_max) = " + fmt(t_min));
        }
    }

    if (f.omega > 0.0) { // sampling constraints are omega dependent
        const double cap = (2.0 * std::numbers::pi / f.omega) / 20.0;
        if (!(cfg.integrator.rel_tol > 0.0 && cfg.integrator.rel_tol <= 1e-6))
            error("rel_tol", "must lie in (0, 1e-6], got " + fmt(cfg.integrator.rel_tol));
        if (!(cfg.integrator.abs_tol > 0.0 && cfg.integrator.abs_tol <= 1e-6))
            error("abs_tol", "must lie in (0, 1e-6], got " + fmt(cfg.integrator.abs_tol));
        if (cfg.integrator.max_step > 0.0 && cfg.integrator.max_step > cap * (1.0 + 1e-12))
            error("max_step", "must not exceed (2 pi / omega)/20 = " + fmt(cap)
                                  + " so the counter-rotating period stays resolved");
        if (cfg.integrator.max_step < 0.0) error("max_step", "must be >= 0 (0 selects the default)");
        if (cfg.integrator.sample_dt < 0.0) error("sample_dt", "must be >= 0 (0 selects the default)");
    }

    if (needs_t_end(cfg.experiment) && !(cfg.t_end > 0.0))
        error("t_end", "must be > 0 for experiment '" + experiment_name(cfg.experiment) + "'");
    if (cfg.experiment == Experiment::PhaseSweep || cfg.experiment == Experiment::RotationError) {
        if (cfg.n_points < 8) error("n_points", "must be >= 8");
        if (cfg.tau < 0.0) error("tau", "must be >= 0 (0 solves the pi/2-pulse time)");
        if (!(f.g0_max > 0.0)) error("g0_max", "must be > 0 to define a pi/2 pulse");
    }
    if (cfg.experiment == Experiment::FloquetCompare
        && (cfg.floquet_order < 1 || cfg.floquet_order > 8)) {
        error("floquet_order", "must lie in [1, 8]");
    }
    if (cfg.output_path.empty()) error("output_path", "must not be empty");

    return out;
}

std::string to_json_text(const RunConfig& cfg) {
    json j;
    j["experiment"] = experiment_name(cfg.experiment);
    j["g0_max"] = cfg.field.g0_max;
    j["omega"] = cfg.field.omega;
    j["phi"] = cfg.field.phi;
    j["tau_sw"] = cfg.field.tau_sw;
    j["epsilon"] = cfg.field.epsilon;
    j["envelope"] = envelope_name(cfg.envelope.kind);
    j["rel_tol"] = cfg.integrator.rel_tol;
    j["abs_tol"] = cfg.integrator.abs_tol;
    j["max_step"] = cfg.integrator.max_step;
    j["sample_dt"] = cfg.integrator.sample_dt;
    j["rwa"] = cfg.rwa;
    j["t_end"] = cfg.t_end;
    j["tau"] = cfg.tau;
    j["n_points"] = cfg.n_points;
    j["floquet_order"] = cfg.floquet_order;
    j["seed"] = cfg.seed;
    j["output_path"] = cfg.output_path;
    j["output_format"] = format_name(cfg.output_format);
    return j.dump(2) + "\n";
}

RunConfig from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");

    static const char* known[] = {"experiment", "g0_max", "omega", "phi", "tau_sw",
                                  "epsilon", "envelope", "rel_tol", "abs_tol",
                                  "max_step", "sample_dt", "rwa", "t_end", "tau",
                                  "n_points", "floquet_order", "seed", "output_path",
                                  "output_format"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ValidationError("config: unknown key '" + key + "'");
    }

    RunConfig cfg;
    auto get_double = [&j](const char* key, double& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) throw ValidationError(std::string("config: '") + key + "' must be a number");
        dst = j[key].get<double>();
    };
    auto get_int = [&j](const char* key, int& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer()) throw ValidationError(std::string("config: '") + key + "' must be an integer");
        dst = j[key].get<int>();
    };

    if (j.contains("experiment")) {
        const std::string name = j["experiment"].is_string() ? j["experiment"].get<std::string>() : "";
        if (name == "trajectory") cfg.experiment = Experiment::Trajectory;
        else if (name == "bso_residual") cfg.experiment = Experiment::BsoResidual;
        else if (name == "phase_sweep") cfg.experiment = Experiment::PhaseSweep;
        else if (name == "rotation_error") cfg.experiment = Experiment::RotationError;
        else if (name == "floquet_compare") cfg.experiment = Experiment::FloquetCompare;
        else
            throw ValidationError("config: 'experiment' must be one of trajectory, bso_residual, "
                                  "phase_sweep, rotation_error, floquet_compare");
    }
    get_double("g0_max", cfg.field.g0_max);
    get_double("omega", cfg.field.omega);
    get_double("phi", cfg.field.phi);
    get_double("tau_sw", cfg.field.tau_sw);
    get_double("epsilon", cfg.field.epsilon);
    if (j.contains("envelope")) {
        const std::string name = j["envelope"].is_string() ? j["envelope"].get<std::string>() : "";
        if (name == "adiabatic_switch") cfg.envelope.kind = EnvelopeKind::AdiabaticSwitch;
        else if (name == "constant") cfg.envelope.kind = EnvelopeKind::Constant;
        else throw ValidationError("config: 'envelope' must be adiabatic_switch or constant");
    }
    get_double("rel_tol", cfg.integrator.rel_tol);
    get_double("abs_tol", cfg.integrator.abs_tol);
    get_double("max_step", cfg.integrator.max_step);
    get_double("sample_dt", cfg.integrator.sample_dt);
    if (j.contains("rwa")) {
        if (!j["rwa"].is_boolean()) throw ValidationError("config: 'rwa' must be a boolean");
        cfg.rwa = j["rwa"].get<bool>();
    }
    get_double("t_end", cfg.t_end);
    get_double("tau", cfg.tau);
    get_int("n_points", cfg.n_points);
    get_int("floquet_order", cfg.floquet_order);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            throw ValidationError("config: 'seed' must be a non-negative integer");
        cfg.seed = j["seed"].get<unsigned long>();
    }
    if (j.contains("output_path")) {
        if (!j["output_path"].is_string()) throw ValidationError("config: 'output_path' must be a string");
        cfg.output_path = j["output_path"].get<std::string>();
    }
    if (j.contains("output_format")) {
        const std::string name = j["output_format"].is_string() ? j["output_format"].get<std::string>() : "";
        if (name == "csv") cfg.output_format = OutputFormat::Csv;
        else if (name == "json") cfg.output_format = OutputFormat::Json;
        else throw ValidationError("config: 'output_format' must be csv or json");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

void save_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("config: cannot write '" + path + "'");
    out << to_json_text(cfg);
}

RunConfig default_config() {
    RunConfig cfg;
    cfg.experiment = Experiment::Trajectory;
    cfg.field = FieldParams{0.4, 1.0, 0.0, 50.0, 1.0};
    cfg.envelope.kind = EnvelopeKind::AdiabaticSwitch;
    cfg.t_end = 80.0;
    cfg.output_path = "trajectory.csv";
    return cfg;
}

} // namespace bso::cli
