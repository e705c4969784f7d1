// bso-sim — command-line front end: run configured experiments, validate
// configurations, emit the bundled figure presets, and self-check the
// integrator on randomized parameter draws.

#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"

#include "bso/config.hpp"
#include "bso/runner.hpp"

namespace {

int cmd_run(const std::string& config_path) {
    try {
        return bso::cli::run(bso::cli::load_config(config_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_validate(const std::string& config_path) {
    try {
        const auto cfg = bso::cli::load_config(config_path);
        const auto violations = bso::cli::validate(cfg);
        for (const auto& v : violations) {
            std::cout << (v.severity == bso::cli::Severity::Error ? "error" : "warning")
                      << ": " << v.field << ": " << v.message << "\n";
        }
        if (violations.empty()) std::cout << "ok\n";
        return bso::cli::has_errors(violations) ? 1 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_preset(const std::string& name, const std::string& out_dir) {
    try {
        bso::cli::run_preset(name, out_dir);
        return 0;
    } catch (const bso::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// Randomized norm-conservation probe of the exact integrator: resonant
// draws with eta0 <= 0.2 propagated to t = 100/omega.
int cmd_check(const std::string& config_path, int draws) {
    try {
        unsigned long seed = 1;
        if (!config_path.empty()) seed = bso::cli::load_config(config_path).seed;
        std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
        std::uniform_real_distribution<double> u01(0.0, 1.0);

        double worst = 0.0;
        for (int i = 0; i < draws; ++i) {
            bso::FieldParams p;
            p.omega = 0.5 + 2.5 * u01(rng);
            p.epsilon = p.omega;
            p.g0_max = 4.0 * p.omega * (0.005 + 0.195 * u01(rng));
            p.phi = 2.0 * 3.14159265358979323846 * u01(rng);
            p.tau_sw = (5.0 + 45.0 * u01(rng)) / p.omega;
            bso::DriveEnvelope env;
            env.kind = (i % 2 == 0) ? bso::EnvelopeKind::AdiabaticSwitch
                                    : bso::EnvelopeKind::Constant;
            const auto ts = bso::dynamics::integrate(p, env, {}, 100.0 / p.omega, false);
            for (const auto& s : ts.states) {
                worst = std::max(worst, std::abs(s.norm() - 1.0));
            }
        }
        std::printf("max norm defect %.3e over %d draws (seed %lu)\n", worst, draws, seed);
        return worst <= 1e-9 ? 0 : 2;
    } catch (const bso::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bso-sim: resonant two-level dynamics beyond the rotating-wave approximation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    std::string check_config;
    int draws = 100;

    auto* run_cmd = app.add_subcommand("run", "run the experiment described by a JSON config");
    run_cmd->add_option("config", config_path, "path to the config file")->required();

    auto* val_cmd = app.add_subcommand("validate", "check a config against every invariant");
    val_cmd->add_option("config", config_path, "path to the config file")->required();

    auto* preset_cmd = app.add_subcommand("preset", "emit a bundled data-set preset");
    preset_cmd->add_option("name", preset_name, "preset name (fig1-right)")->required();
    preset_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* check_cmd = app.add_subcommand("check", "randomized norm-conservation self-test");
    check_cmd->add_option("config", check_config, "config supplying the RNG seed (optional)");
    check_cmd->add_option("--draws", draws, "number of random parameter draws")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (run_cmd->parsed()) return cmd_run(config_path);
    if (val_cmd->parsed()) return cmd_validate(config_path);
    if (preset_cmd->parsed()) return cmd_preset(preset_name, out_dir);
    if (check_cmd->parsed()) return cmd_check(check_config, draws);
    return 1;
}
