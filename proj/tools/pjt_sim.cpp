// pjt-sim: command line driver for the crossing simulator.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pjt/classical.hpp"
#include "pjt/config.hpp"
#include "pjt/experiment.hpp"
#include "pjt/scattering.hpp"
#include "pjt/verify.hpp"

namespace {

using namespace pjt;

std::pair<double, double> parse_pair_arg(const std::string &s, const char *what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError(what, "expected X,Y but got '" + s + "'");
    try {
        const double a = std::stod(s.substr(0, comma));
        const double b = std::stod(s.substr(comma + 1));
        return {a, b};
    } catch (const std::exception &) {
        throw CLI::ValidationError(what, "expected X,Y but got '" + s + "'");
    }
}

void print_matrix(std::ostream &out, const char *source, const ScatteringMatrix &s) {
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out << source << ',' << i << ',' << j << ',' << format_real(s(i, j).real()) << ','
                << format_real(s(i, j).imag()) << '\n';
        }
    }
}

int report(const Report &r) {
    r.print(std::cout);
    if (const Check *bad = r.first_failure()) {
        std::cerr << "verification failed: " << bad->name << '\n';
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulator for the three-level pseudo Jahn-Teller crossing"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_override;
    auto *run_cmd = app.add_subcommand("run", "Run an experiment described by a config file");
    run_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("-o,--output", output_override, "CSV output path (overrides the config)");

    std::string z_arg = "1,0";
    bool numeric = false;
    double s_max = 200.0;
    auto *smat = app.add_subcommand("scattering-matrix", "Print S(z) and its diagnostics");
    smat->add_option("--z", z_arg, "z as RE,IM")->required();
    smat->add_flag("--numeric", numeric, "Also extract S(z) by direct integration");
    smat->add_option("--s-max", s_max, "Integration half-range for --numeric")->check(CLI::PositiveNumber);

    std::string mode_arg = "plus";
    std::string q0_arg, p0_arg;
    double t_end = 1.0;
    int samples = 100;
    auto *traj = app.add_subcommand("trajectory", "Trace one classical trajectory as CSV");
    traj->add_option("--mode", mode_arg, "plus, minus or zero")->check(CLI::IsMember({"plus", "minus", "zero"}));
    traj->add_option("--q0", q0_arg, "Initial position X,Y")->required();
    traj->add_option("--p0", p0_arg, "Initial momentum X,Y")->required();
    traj->add_option("--t", t_end, "Final time")->required();
    traj->add_option("--samples", samples, "Number of output intervals")->check(CLI::PositiveNumber);

    std::string suite;
    std::string vz_arg = "1,0";
    double v_s_max = 200.0;
    auto *ver = app.add_subcommand("verify", "Run an invariant suite");
    ver->add_option("suite", suite, "scattering, projectors or classical")
        ->required()
        ->check(CLI::IsMember({"scattering", "projectors", "classical"}));
    ver->add_option("--z", vz_arg, "z as RE,IM (scattering suite)");
    ver->add_option("--s-max", v_s_max, "Integration half-range (scattering suite)")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            ExperimentConfig cfg = load_config(config_path);
            if (!output_override.empty()) cfg.output = output_override;
            if (cfg.output.empty() || cfg.output == "-") return run_experiment(cfg, std::cout);
            std::ofstream out(cfg.output, std::ios::binary);
            if (!out) throw Error("cannot open output file " + cfg.output);
            const int status = run_experiment(cfg, out);
            out.close();
            if (!out) throw Error("failed writing " + cfg.output);
            return status;
        }
        if (*smat) {
            const auto [re, im] = parse_pair_arg(z_arg, "--z");
            const Complex z(re, im);
            const ScatteringMatrix s = analytic_s_matrix(z);
            std::cout << "source,row,col,re,im\n";
            print_matrix(std::cout, "analytic", s);
            ScatteringMatrix num;
            if (numeric) {
                ScatteringSettings settings;
                settings.s_max = s_max;
                num = numerical_s_matrix(z, settings);
                print_matrix(std::cout, "numeric", num);
            }
            std::cout << "\ndiagnostic,value\n";
            std::cout << "unitarity_analytic," << format_real(unitarity_defect(s)) << '\n';
            std::cout << "branching_consistency," << format_real(branching_consistency(z)) << '\n';
            if (numeric) {
                std::cout << "unitarity_numeric," << format_real(unitarity_defect(num)) << '\n';
                std::cout << "max_abs_numeric_minus_analytic," << format_real((num - s).cwiseAbs().maxCoeff())
                          << '\n';
            }
            return 0;
        }
        if (*traj) {
            const auto [qx, qy] = parse_pair_arg(q0_arg, "--q0");
            const auto [px, py] = parse_pair_arg(p0_arg, "--p0");
            const PhaseState start{{qx, qy}, {px, py}, 0.0, parse_mode(mode_arg)};
            write_trajectory(std::cout, trace(start, t_end, samples));
            return 0;
        }
        if (*ver) {
            if (suite == "scattering") {
                const auto [re, im] = parse_pair_arg(vz_arg, "--z");
                ScatteringSettings settings;
                settings.s_max = v_s_max;
                return report(verify_scattering(Complex(re, im), settings));
            }
            if (suite == "projectors") return report(verify_projectors());
            return report(verify_classical());
        }
    } catch (const SchemaError &e) {
        std::cerr << "error: invalid configuration\n";
        for (const auto &v : e.violations()) std::cerr << "  " << v << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
