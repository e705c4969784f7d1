// config.hpp — run configurations for the command-line front end: a flat
// JSON schema, invariant validation with per-field diagnostics, and presets.

#pragma once

#include <string>
#include <vector>

#include "bso/dynamics.hpp"
#include "bso/field.hpp"

namespace bso::cli {

enum class Experiment { Trajectory, BsoResidual, PhaseSweep, RotationError, FloquetCompare };
enum class OutputFormat { Csv, Json };

struct RunConfig {
    Experiment experiment = Experiment::Trajectory;
    FieldParams field;
    DriveEnvelope envelope;
    dynamics::IntegratorConfig integrator;
    bool rwa = false;
    double t_end = 80.0;    // Trajectory, BsoResidual, FloquetCompare
    double tau = 0.0;       // PhaseSweep; 0 solves the pi/2-pulse time
    int n_points = 32;      // PhaseSweep, RotationError
    int floquet_order = 1;  // FloquetCompare
    unsigned long seed = 1; // randomized check subcommand
    std::string output_path = "out.csv";
    OutputFormat output_format = OutputFormat::Csv;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

enum class Severity { Warning, Error };

struct Violation {
    Severity severity = Severity::Error;
    std::string field;   // offending config key
    std::string message; // reason
};

// Checks every referenced type invariant before any computation: field
// parameter ranges, eta0 < 0.25, resonance where an analytical formula will
// be evaluated, switching adiabaticity (warning level), sampling and
// tolerance constraints, experiment arguments, output settings.
std::vector<Violation> validate(const RunConfig& cfg);

bool has_errors(const std::vector<Violation>& violations);

// JSON round trip. load_config throws ValidationError on parse or schema
// problems (unknown keys, wrong types, bad enum strings).
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);
std::string to_json_text(const RunConfig& cfg);
RunConfig from_json_text(const std::string& text);

std::string experiment_name(Experiment e);

// A valid ready-to-run configuration (resonant eta0 = 0.1 trajectory).
RunConfig default_config();

} // namespace bso::cli
