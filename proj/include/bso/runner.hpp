// runner.hpp — experiment execution for the CLI: deterministic CSV/JSON
// emission (fixed 17-significant-digit scientific formatting) and the
// bundled presets.

#pragma once

#include <string>
#include <vector>

#include "bso/analysis.hpp"
#include "bso/config.hpp"

namespace bso::cli {

// Executes the configured experiment and writes its output files.
// Throws ValidationError on config errors, NumericalError on solver failure.
// Warnings are reported on stderr and do not stop the run.
void execute(const RunConfig& cfg);

// execute() wrapped into the CLI exit-code contract:
// 0 success, 1 validation failure, 2 numerical failure.
int run(const RunConfig& cfg);

// Preset bundles. "fig1-right" writes trajectory.csv, residual.csv,
// envelope.csv, phase_sweep.csv and phase_sweep.json into out_dir.
std::vector<std::string> preset_names();
void run_preset(const std::string& name, const std::string& out_dir);

// Deterministic serialization helpers (exposed for tests).
std::string format_sci(double v); // %.16e, 17 significant digits
std::string trajectory_csv(const dynamics::TimeSeries& ts);
std::string residual_csv(const dynamics::TimeSeries& ts, const analysis::BsoResidual& res);
std::string envelope_csv(const FieldParams& p, const DriveEnvelope& env,
                         const std::vector<double>& times);
std::string phase_sweep_csv(const analysis::SweepResult& sweep);
std::string phase_sweep_sidecar_json(const analysis::SweepResult& sweep, double tau);

} // namespace bso::cli
