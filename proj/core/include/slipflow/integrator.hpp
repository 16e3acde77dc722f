#pragma once

#include <optional>
#include <string>

#include "slipflow/density.hpp"
#include "slipflow/friction.hpp"
#include "slipflow/noise.hpp"

namespace slipflow {

struct State {
    DensityState density;
    VelocityCoeffs velocity;
    double time = 0.0;
    int step = 0;
    bool cutoff_active = false;  // chi < 1 at any step so far
    double chi = 1.0;            // chi value of the last step
};

/// One ledger row. Row n holds the state quantities at t_n, the dissipation
/// and correction integrals over [t_{n-1}, t_n] (zero in row 0), the
/// martingale increment of that step, and the cumulative balance residual.
struct LedgerRow {
    int step = 0;
    double t = 0.0;
    double mass = 0.0;
    double kinetic_energy = 0.0;
    double potential_energy = 0.0;
    double visc_dissipation = 0.0;
    double eps_grad_u_dissipation = 0.0;
    double eps_pressure_dissipation = 0.0;
    double boundary_dissipation = 0.0;
    double ito_correction = 0.0;
    double martingale_increment = 0.0;
    double energy_residual = 0.0;
    double min_rho = 0.0;
    double max_rho = 0.0;
    double u_norm_Vm = 0.0;
    double chi_value = 1.0;
    int cfl_substeps = 0;
};

inline const char* ledger_header() {
    return "step,t,mass,kinetic_energy,potential_energy,visc_dissipation,"
           "eps_grad_u_dissipation,eps_pressure_dissipation,boundary_dissipation,"
           "ito_correction,martingale_increment,energy_residual,min_rho,max_rho,"
           "u_norm_Vm,chi_value,cfl_substeps";
}

/// Everything a single trajectory needs, assembled once.
struct SimSetup {
    ChannelDomain domain;
    GalerkinSpace space;
    SimParams params;
    NoiseModel noise;
    WallField g;          // friction modulus per wall node
    double T = 1.0;       // horizon
    double cfl_safety = 0.9;
    double dt_inner = 0.0;      // 0: automatic by CFL; > 0: forced inner step
    double body_force_x = 0.0;  // benchmark-only constant tangential force
    bool coupled_mode = false;  // re-evaluate drift every inner substep
    bool record_fields = true;
    double ito_slack_tol = 1e-12;

    int nsteps() const { return static_cast<int>(std::llround(T / params.h)); }
};

struct Snapshot {
    GridField rho;
    Eigen::VectorXd u;
    double time = 0.0;
};

struct TrajectoryRecord {
    uint64_t seed = 0;
    std::vector<LedgerRow> rows;
    std::vector<Snapshot> snapshots;       // per row when record_fields
    std::vector<double> increments;        // [step * K + k], the exact dW used
    std::vector<double> div_sup;           // per row, ||div [u]_R||_inf
    std::vector<double> force_work;        // per row, step-integrated body-force work
    int K = 0;
    double h = 0.0;
    double min_ito_slack_low = 0.0;        // min over steps of correction
    double min_ito_slack_high = 0.0;       // min over steps of upper - correction
    bool deterministic = true;
    std::string config_echo;
    std::optional<std::string> failure;    // set when a step aborted the run
    int failure_step = -1;
};

/// Initial data for run_trajectory.
struct InitialData {
    GridField rho0;
    VelocityCoeffs u0;
};

/// One outer step of the iteration scheme: freeze u at t = nh, advance the
/// density by CFL-limited inner substeps, accumulate the drift by the
/// left-rectangle rule in the density, add the Ito increment with both
/// coefficients frozen at nh, then recover u from the mass operator at the
/// new density.
State advance_step(const State& s, const SimSetup& setup, const WienerPath& path, int n,
                   LedgerRow* row_out = nullptr, double* force_work_out = nullptr,
                   ItoCorrection* corr_out = nullptr);

TrajectoryRecord run_trajectory(const SimSetup& setup, const InitialData& init, uint64_t seed);

/// Same, but driven by an externally supplied (possibly refined) Wiener path
/// so that h-refinement studies share one Brownian realization.
TrajectoryRecord run_trajectory(const SimSetup& setup, const InitialData& init, uint64_t seed,
                                const WienerPath* external_path);

/// Stream split for ensembles: path index -> independent trajectory seed.
uint64_t derive_seed(uint64_t seed, uint64_t index);

/// Per-step ||u1 - u2||_{V_m} + ||rho1 - rho2||_{L^1} for two runs on the
/// same Wiener path, the second with e_1-coefficient perturbed.
std::vector<double> twin_run_divergence(const SimSetup& setup, const InitialData& init,
                                        uint64_t seed, double perturbation);

}  // namespace slipflow
