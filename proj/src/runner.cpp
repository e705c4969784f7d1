#include "bso/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"

#include "bso/floquet.hpp"

namespace bso::cli {

namespace {

using nlohmann::json;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("output: cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw ValidationError("output: write to '" + path + "' failed");
}

void append_row(std::string& s, const std::vector<double>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) s += ',';
        s += format_sci(row[i]);
    }
    s += '\n';
}

std::string columns_json(const std::vector<std::string>& names,
                         const std::vector<std::vector<double>>& columns) {
    json j;
    for (std::size_t c = 0; c < names.size(); ++c) j[names[c]] = columns[c];
    return j.dump(2) + "\n";
}

std::vector<double> sample_grid(const FieldParams& p,
                                const dynamics::IntegratorConfig& cfg, double t_end) {
    const double dt = cfg.resolved_sample_dt(p);
    std::vector<double> times;
    const auto n_grid = static_cast<std::size_t>(std::floor(t_end / dt * (1.0 + 1e-12)));
    times.reserve(n_grid + 2);
    for (std::size_t k = 0; k <= n_grid; ++k) {
        const double ts = static_cast<double>(k) * dt;
        if (ts > t_end) break;
        times.push_back(ts);
    }
    if (t_end - times.back() > 1e-9 * dt) times.push_back(t_end);
    return times;
}

std::string sidecar_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".json");
    return p.string();
}

void run_trajectory(const RunConfig& cfg) {
    const auto ts = dynamics::integrate(cfg.field, cfg.envelope, cfg.integrator,
                                        cfg.t_end, cfg.rwa);
    if (cfg.output_format == OutputFormat::Csv) {
        write_file(cfg.output_path, trajectory_csv(ts));
    } else {
        std::vector<std::vector<double>> cols(6);
        for (std::size_t i = 0; i < ts.times.size(); ++i) {
            cols[0].push_back(ts.times[i]);
            cols[1].push_back(ts.states[i].c0.real());
            cols[2].push_back(ts.states[i].c0.imag());
            cols[3].push_back(ts.states[i].c1.real());
            cols[4].push_back(ts.states[i].c1.imag());
            cols[5].push_back(ts.p1[i]);
        }
        write_file(cfg.output_path,
                   columns_json({"t", "re_c0", "im_c0", "re_c1", "im_c1", "p1"}, cols));
    }
}

void run_bso_residual(const RunConfig& cfg) {
    const auto ts = dynamics::integrate(cfg.field, cfg.envelope, cfg.integrator,
                                        cfg.t_end, cfg.rwa);
    const auto res = analysis::extract_bso(ts, cfg.field, cfg.envelope);
    if (cfg.output_format == OutputFormat::Csv) {
        write_file(cfg.output_path, residual_csv(ts, res));
    } else {
        std::vector<std::vector<double>> cols(5);
        for (std::size_t i = 0; i < ts.times.size(); ++i) {
            cols[0].push_back(ts.times[i]);
            cols[1].push_back(ts.p1[i]);
            cols[2].push_back(ts.p1[i] - res.residual[i]);
            cols[3].push_back(res.residual[i]);
            cols[4].push_back(res.predicted[i]);
        }
        write_file(cfg.output_path,
                   columns_json({"t", "p1", "rabi_reference", "residual", "predicted_bso"}, cols));
    }
}

void run_phase_sweep(const RunConfig& cfg) {
    const double tau = cfg.tau > 0.0 ? cfg.tau
                                     : floquet::solve_pi_half_time(cfg.field, cfg.envelope);
    const auto sweep = analysis::phase_sweep(cfg.field, cfg.envelope, cfg.integrator,
                                             tau, cfg.n_points);
    if (cfg.output_format == OutputFormat::Csv) {
        write_file(cfg.output_path, phase_sweep_csv(sweep));
        write_file(sidecar_path(cfg.output_path), phase_sweep_sidecar_json(sweep, tau));
    } else {
        json j;
        j["phi"] = sweep.values;
        j["p1"] = sweep.observable;
        j["amplitude"] = sweep.fit.amplitude;
        j["mean"] = sweep.fit.mean;
        j["phase_offset"] = sweep.fit.phase_offset;
        j["rms_fit_residual"] = sweep.fit.rms_residual;
        j["frequency"] = sweep.fit.frequency;
        j["tau"] = tau;
        write_file(cfg.output_path, j.dump(2) + "\n");
    }
}

void run_rotation_error(const RunConfig& cfg) {
    const auto err = analysis::rotation_error(cfg.field, cfg.envelope, cfg.integrator,
                                              cfg.n_points);
    if (cfg.output_format == OutputFormat::Json) {
        json j;
        j["worst_case"] = err.worst_case;
        j["phase_averaged_rms"] = err.phase_averaged_rms;
        j["tau"] = err.tau;
        j["eta_tau"] = err.eta_tau;
        write_file(cfg.output_path, j.dump(2) + "\n");
    } else {
        std::string s = "# pi/2 rotation error; dimensionless, tau in 1/omega units\n";
        s += "worst_case,phase_averaged_rms,tau,eta_tau\n";
        append_row(s, {err.worst_case, err.phase_averaged_rms, err.tau, err.eta_tau});
        write_file(cfg.output_path, s);
    }
}

void run_floquet_compare(const RunConfig& cfg) {
    const auto exact = dynamics::integrate(cfg.field, cfg.envelope, cfg.integrator,
                                           cfg.t_end, false);
    const auto modes = floquet::integrate_modes(cfg.field, cfg.envelope, cfg.integrator,
                                                cfg.t_end, cfg.floquet_order);
    const floquet::ClosedFormSolution closed(cfg.field, cfg.envelope);

    std::string s = "# exact vs truncated-mode vs closed-form excited population; "
                    "t in 1/omega units, populations dimensionless\n";
    s += "t,p1_exact,p1_floquet,p1_closed_form\n";
    std::vector<std::vector<double>> cols(4);
    for (std::size_t i = 0; i < exact.times.size(); ++i) {
        const double t = exact.times[i];
        const double p_modes = reconstruct(modes.states[i], cfg.field, t).p1();
        const double p_closed = closed.p1(t);
        if (cfg.output_format == OutputFormat::Csv) {
            append_row(s, {t, exact.p1[i], p_modes, p_closed});
        } else {
            cols[0].push_back(t);
            cols[1].push_back(exact.p1[i]);
            cols[2].push_back(p_modes);
            cols[3].push_back(p_closed);
        }
    }
    if (cfg.output_format == OutputFormat::Csv) {
        write_file(cfg.output_path, s);
    } else {
        write_file(cfg.output_path,
                   columns_json({"t", "p1_exact", "p1_floquet", "p1_closed_form"}, cols));
    }
}

} // namespace

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string trajectory_csv(const dynamics::TimeSeries& ts) {
    std::string s = "# rotating-frame trajectory; t in 1/omega units, amplitudes and p1 dimensionless\n";
    s += "t,re_c0,im_c0,re_c1,im_c1,p1\n";
    for (std::size_t i = 0; i < ts.times.size(); ++i) {
        append_row(s, {ts.times[i], ts.states[i].c0.real(), ts.states[i].c0.imag(),
                       ts.states[i].c1.real(), ts.states[i].c1.imag(), ts.p1[i]});
    }
    return s;
}

std::string residual_csv(const dynamics::TimeSeries& ts, const analysis::BsoResidual& res) {
    std::string s = "# excited population, averaged Rabi reference sin^2(G/2), residual, "
                    "and first-order prediction; t in 1/omega units\n";
    s += "t,p1,rabi_reference,residual,predicted_bso\n";
    for (std::size_t i = 0; i < ts.times.size(); ++i) {
        append_row(s, {ts.times[i], ts.p1[i], ts.p1[i] - res.residual[i], res.residual[i],
                       res.predicted[i]});
    }
    return s;
}

std::string envelope_csv(const FieldParams& p, const DriveEnvelope& env,
                         const std::vector<double>& times) {
    std::string s = "# drive envelope; t in 1/omega units, g0 and g0_avg angular frequencies, "
                    "eta dimensionless\n";
    s += "t,g0,g0_avg,eta\n";
    for (double t : times) {
        append_row(s, {t, rabi_amplitude(p, env, t), average_rabi(p, env, t), eta(p, env, t)});
    }
    return s;
}

std::string phase_sweep_csv(const analysis::SweepResult& sweep) {
    std::string s = "# excited population at the pi/2-pulse time vs absolute field phase; "
                    "phi in radians\n";
    s += "phi,p1\n";
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        append_row(s, {sweep.values[i], sweep.observable[i]});
    }
    return s;
}

std::string phase_sweep_sidecar_json(const analysis::SweepResult& sweep, double tau) {
    json j;
    j["amplitude"] = sweep.fit.amplitude;
    j["mean"] = sweep.fit.mean;
    j["phase_offset"] = sweep.fit.phase_offset;
    j["rms_fit_residual"] = sweep.fit.rms_residual;
    j["frequency"] = sweep.fit.frequency;
    j["tau"] = tau;
    return j.dump(2) + "\n";
}

void execute(const RunConfig& cfg) {
    const auto violations = validate(cfg);
    for (const auto& v : violations) {
        if (v.severity == Severity::Warning) {
            std::cerr << "warning: " << v.field << ": " << v.message << "\n";
        }
    }
    for (const auto& v : violations) {
        if (v.severity == Severity::Error) {
            throw ValidationError("config: " + v.field + ": " + v.message);
        }
    }
    switch (cfg.experiment) {
        case Experiment::Trajectory: run_trajectory(cfg); break;
        case Experiment::BsoResidual: run_bso_residual(cfg); break;
        case Experiment::PhaseSweep: run_phase_sweep(cfg); break;
        case Experiment::RotationError: run_rotation_error(cfg); break;
        case Experiment::FloquetCompare: run_floquet_compare(cfg); break;
    }
}

int run(const RunConfig& cfg) {
    try {
        execute(cfg);
        return 0;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

std::vector<std::string> preset_names() { return {"fig1-right"}; }

void run_preset(const std::string& name, const std::string& out_dir) {
    if (name != "fig1-right") {
        std::string known;
        for (const auto& n : preset_names()) known += " " + n;
        throw ValidationError("preset: unknown preset '" + name + "'; available:" + known);
    }
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    // Representative eta0 = 0.1 regime, natural units (omega = 1): adiabatic
    // switch-on over tau_sw = 20, trajectory across several Rabi cycles.
    RunConfig base;
    base.field = FieldParams{0.4, 1.0, 0.0, 20.0, 1.0};
    base.envelope.kind = EnvelopeKind::AdiabaticSwitch;
    base.t_end = 80.0;

    const auto ts = dynamics::integrate(base.field, base.envelope, base.integrator,
                                        base.t_end, false);
    const auto res = analysis::extract_bso(ts, base.field, base.envelope);
    write_file((dir / "trajectory.csv").string(), trajectory_csv(ts));
    write_file((dir / "residual.csv").string(), residual_csv(ts, res));
    write_file((dir / "envelope.csv").string(),
               envelope_csv(base.field, base.envelope,
                            sample_grid(base.field, base.integrator, base.t_end)));

    const double tau = floquet::solve_pi_half_time(base.field, base.envelope);
    const auto sweep = analysis::phase_sweep(base.field, base.envelope, base.integrator,
                                             tau, 32);
    write_file((dir / "phase_sweep.csv").string(), phase_sweep_csv(sweep));
    write_file((dir / "phase_sweep.json").string(), phase_sweep_sidecar_json(sweep, tau));
}

} // namespace bso::cli
