#pragma once

#include <string>

#include "slipflow/integrator.hpp"

namespace slipflow {

/// Flat key=value run configuration (version 1 key list). Unknown keys are
/// hard errors so parameter sweeps can mutate single keys safely.
struct RunConfig {
    // domain
    double Lx = 2.0 * M_PI;
    int Nx = 64;
    int Ny = 32;
    // physics and approximation layers
    double gamma = 1.4;
    double a = 1.0;
    double mu = 0.1;
    double lambda = 0.0;
    double delta = 0.1;
    double Gamma = 6.0;
    double epsilon = 0.01;
    double alpha = 0.01;
    double R = std::numeric_limits<double>::infinity();
    int m = 24;
    double h = 0.01;
    std::string boundary_mode = "friction";  // friction | navier
    // run control
    double T = 1.0;
    double cfl_safety = 0.9;
    double dt_inner = 0.0;                    // 0: automatic via CFL
    std::string integrator_mode = "iterated"; // iterated | coupled
    std::string snapshots = "final";          // none | final | all
    std::string checks = "all";               // all | hard
    // noise
    int K = 8;
    double g0 = 0.0;
    std::string noise_family = "off";  // linear-momentum | density-only | off
    double noise_c1 = 0.5;
    double noise_c2 = 0.5;
    // friction modulus
    double g_const = 1.0;
    std::string g_table_bottom;  // optional two-column table per wall
    std::string g_table_top;
    // benchmark forcing
    double body_force_x = 0.0;
    // initial data
    double rho0_base = 1.0;
    double rho0_amp = 0.0;
    int rho0_kx = 1;
    int rho0_ky = 0;
    int u0_mode = 0;
    double u0_amp = 0.0;
    int u0_mode2 = 1;
    double u0_amp2 = 0.0;
};

/// Parses and validates; throws ConfigError listing every violation.
RunConfig parse_config(const std::string& text);

/// Canonical echo; parse(echo_config(c)) reproduces the echo byte for byte.
std::string echo_config(const RunConfig& c);

/// Validates all cross-field constraints, naming each offended key.
void validate_config(const RunConfig& c);

SimParams params_from_config(const RunConfig& c);
SimSetup build_setup(const RunConfig& c);
InitialData build_initial_data(const RunConfig& c, const SimSetup& setup);

}  // namespace slipflow
