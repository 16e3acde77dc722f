#pragma once

#include <functional>
#include <string>

#include "slipflow/integrator.hpp"

namespace slipflow {

/// int (1/2 rho |u|^2 + P_delta(rho)) dx by quadrature.
double total_energy(const GridField& rho, const VelocityCoeffs& u, const SimParams& p,
                    const GalerkinSpace& space);

/// Cumulative balance residual per ledger row, recomputed from the stored
/// columns: E(t) + sum dissipations - E(0) - sum corrections - sum martingale
/// increments (minus recorded body-force work, when present).
std::vector<double> energy_balance_residual(const TrajectoryRecord& rec);

/// margin = -residual: the inequality form of the same assembly.
std::vector<double> energy_inequality_margin(const TrajectoryRecord& rec);

// --- versioned test-function catalogues (wf-cat-v1) ---

inline constexpr const char* kCatalogueVersion = "wf-cat-v1";

struct TimeTest {
    std::string name;
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
};

/// Smooth bumps on [0, T): one supported away from 0, one with phi(0) = 1.
std::vector<TimeTest> catalogue_time_tests(double T);

struct ScalarTest {
    std::string name;
    GridField psi;
    VecField grad_psi;
};

std::vector<ScalarTest> catalogue_scalar_tests(const ChannelDomain& dom);

struct MomentumTest {
    std::string name;
    VelocityCoeffs a;  // element of V_m with exactly zero wall trace
};

/// Zero-trace members of V_m: y-component modes and cosine-difference
/// combinations of x-component modes. Throws when m is too small to host
/// the catalogue.
std::vector<MomentumTest> catalogue_momentum_tests(const GalerkinSpace& space);

struct RenormTest {
    std::string name;
    std::function<double(double)> b;
    std::function<double(double)> db;
};

/// b(z) = z (identity case), b = const, and a smoothed truncation with
/// b'(z) = 0 beyond 2M.
std::vector<RenormTest> catalogue_renorm_tests(double M);

// --- weak-form residuals of the regularized system on a trajectory ---

/// Residual of the weak continuity identity (with the eps-diffusion term
/// assembled through the solver's discrete Laplacian).
double weak_residual_continuity(const TrajectoryRecord& rec, const SimSetup& setup,
                                const TimeTest& phi, const ScalarTest& psi);

/// Residual of the V_m momentum identity against a zero-trace test function,
/// with the stochastic integral reconstructed from the stored increments.
double weak_residual_momentum(const TrajectoryRecord& rec, const SimSetup& setup,
                              const TimeTest& phi, const MomentumTest& test);

/// Residual of the renormalized continuity identity for b in the catalogue.
double renormalized_residual(const TrajectoryRecord& rec, const SimSetup& setup,
                             const RenormTest& b, const TimeTest& phi, const ScalarTest& psi);

// --- generalized Korn-Poincare ratio ---

/// ||v||_{W^{1,2}} / ( ||grad v + grad v^T - (2/3) div v I||_{L^2}
///                     + int_walls r |v| ), by grid differencing; the
/// boundary values are extrapolated to the wall nodes. Throws for v = 0.
double korn_poincare_ratio(const ChannelDomain& dom, const VecField& v, const WallField& r);

}  // namespace slipflow
