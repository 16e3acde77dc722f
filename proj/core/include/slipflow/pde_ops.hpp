#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "slipflow/integrator.hpp"

namespace slipflow {

/// Field on a fully periodic torus (0,Lx) x (0,Ly): mode coefficients with
/// signed wavenumbers, produced by a 2D DFT of cell-center samples.
struct SpectralField {
    int nx = 0, ny = 0;
    double Lx = 0.0, Ly = 0.0;
    std::vector<std::complex<double>> hat;  // [l * nx + k]

    std::complex<double>& at(int k, int l) { return hat[static_cast<size_t>(l) * nx + k]; }
    std::complex<double> at(int k, int l) const { return hat[static_cast<size_t>(l) * nx + k]; }
    /// Signed wavevector component (2 pi k~ / L).
    double kappa_x(int k) const;
    double kappa_y(int l) const;
};

SpectralField analyze(const GridField& torus_values, double Lx, double Ly);
GridField synthesize(const SpectralField& f);

/// Even reflection across the y = 1 wall: channel cells extend to a torus of
/// height 2 (Neumann-compatible, so the extension is C^1-smooth in spirit).
GridField extend_even_y(const GridField& channel_field);
GridField restrict_to_channel(const GridField& torus_field);

/// Double Riesz transform R_ij ~ xi_i xi_j / |xi|^2 (zero mode mapped to 0).
SpectralField riesz_transform(const SpectralField& f, int i, int j);

/// Inverse divergence A_j = d_j lap^{-1} ~ -i xi_j / |xi|^2 (mean-zero
/// convention on the zero mode); div(A f) = f - mean and d_i A_j = R_ij.
std::array<SpectralField, 2> inverse_divergence(const SpectralField& f);

SpectralField spectral_derivative(const SpectralField& f, int axis);

/// Channel-level convenience: extend evenly in y, transform, restrict.
GridField riesz_channel(const GridField& f, int i, int j, const ChannelDomain& dom);

// --- Bogovskii operator ---

struct BogovskiiResult {
    VecField u;            // cell-centered velocity with zero wall trace
    double div_residual;   // max |div_h u - (f - mean)| on cells
    double wall_trace;     // max wall-node speed of the discrete solution
    double norm_ratio;     // ||u||_{W^{1,p}} / ||f - mean||_{L^p}
    double mean_removed;   // the subtracted mean of f
};

/// Variational right inverse of the divergence: minimizes the discrete
/// Dirichlet energy subject to div u = f - mean and zero trace, on a
/// staggered grid, solved directly per x mode.
class BogovskiiSolver {
public:
    explicit BogovskiiSolver(const ChannelDomain& dom);
    BogovskiiResult solve(const GridField& f, double p_exponent = 2.0) const;

private:
    ChannelDomain dom_;
    Fft fft_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu_;
};

BogovskiiResult bogovskii_solve(const GridField& f, const ChannelDomain& dom,
                                double p_exponent = 2.0);

// --- pressure-moment identity decomposition ---

struct PressureMomentReport {
    double lhs = 0.0;             // sum_n h chi int p_delta div(Pi_m Phi) dx
    double lhs_unprojected = 0.0;       // sum_n h chi int p_delta (b(rho) - mean) dx
    double boundary_time = 0.0;   // [ <rho u, Pi_m Phi> ]_0^T
    double flux = 0.0;            // time sum of convection+viscous+eps pairings
    double transport = 0.0;       // time sum of <rho u, d_t Pi_m Phi>
    double stochastic = 0.0;      // reconstructed noise pairing
    double friction = 0.0;        // boundary functional pairing
    double residual = 0.0;        // |lhs - (boundary_time - flux - transport
                                  //         - stochastic - friction)|
    double projection_gap = 0.0;  // max_n L2 gap of div(Pi_m Phi) vs b(rho)-mean
    double moment_integral = 0.0; // int int (p + delta(rho + rho^Gamma)) rho^beta
};

/// Tests the momentum update against Pi_m B[rho^beta - mean] and decomposes
/// the pressure moment into the identity terms. beta = 1 reproduces the
/// plain density moment.
PressureMomentReport pressure_moment_diagnostic(const TrajectoryRecord& rec,
                                                const SimSetup& setup, double beta);

/// (4 mu / 3 + lambda) div u - p_delta(rho) pointwise.
GridField effective_viscous_flux(const GridField& rho, const VelocityCoeffs& u,
                                 const SimParams& p, const GalerkinSpace& space);

}  // namespace slipflow
