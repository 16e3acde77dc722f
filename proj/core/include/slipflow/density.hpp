#pragma once

#include <memory>

#include "slipflow/basis.hpp"
#include "slipflow/fft.hpp"
#include "slipflow/geometry.hpp"

namespace slipflow {

struct DensityState {
    GridField rho;
    double time = 0.0;
};

/// Velocity sampled on cell faces by basis evaluation (spectral accuracy).
struct FaceVelocity {
    std::vector<double> ux;  // x-faces, index j*Nx + i, position (i dx, yc(j))
    std::vector<double> uy;  // y-faces, index j*Nx + i, j = 0..Ny; wall rows are 0
    double max_ux = 0.0;
    double max_uy = 0.0;
};

FaceVelocity face_velocity(const GalerkinSpace& space, const VelocityCoeffs& u_cut);

/// Largest stable advection step for the upwind scheme, including a safety
/// factor; infinite when the velocity vanishes.
double cfl_limit(const ChannelDomain& dom, const FaceVelocity& fv, double safety);

/// Sup of the face-difference divergence, the growth-rate bound the upwind
/// update actually feels.
double face_divergence_sup(const ChannelDomain& dom, const FaceVelocity& fv);

/// Smallest number of equal inner steps of h that satisfy the CFL limit.
int cfl_substeps(const ChannelDomain& dom, const FaceVelocity& fv, double h, double safety);

/// One inner step of d rho/dt + div(rho [u]_R) = eps lap rho with Neumann
/// walls: explicit first-order upwind advection followed by a backward-Euler
/// diffusion solve (FFT in x, direct tridiagonal in y). Conserves mass by
/// telescoping fluxes, preserves positivity under the CFL condition, and
/// reports (never clips) a positivity failure.
class DensitySolver {
public:
    DensitySolver(const ChannelDomain& dom, double epsilon);

    DensityState advance(const DensityState& state, const FaceVelocity& fv, double dt) const;
    const ChannelDomain& domain() const { return dom_; }
    double epsilon() const { return eps_; }

private:
    ChannelDomain dom_;
    double eps_;
    Fft fft_;
    mutable double cached_dt_ = -1.0;
    mutable std::vector<double> lam_;  // periodic Laplacian eigenvalues in x

    void diffuse(GridField& rho, double dt) const;
};

/// Convenience wrapper matching the one-shot operation contract.
DensityState advance_density(const DensityState& state, const VelocityCoeffs& u_frozen,
                             const GalerkinSpace& space, double epsilon, double R, double dt_inner,
                             double h, double cfl_safety = 0.9);

struct EnvelopeReport {
    std::vector<double> lower, upper;  // per ledger row
    double lower_margin;               // min over rows of (min rho - lower)
    double upper_margin;               // min over rows of (upper - max rho)
};

/// Maximum-principle envelope from the measured sup norms of div [u]_R:
/// rho_min(0) exp(-int ||div||) <= rho <= rho_max(0) exp(+int ||div||).
EnvelopeReport density_envelope(const std::vector<double>& min_rho,
                                const std::vector<double>& max_rho,
                                const std::vector<double>& div_sup, double h);

}  // namespace slipflow
