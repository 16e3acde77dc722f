#pragma once

#include <cstdint>

#include "slipflow/basis.hpp"
#include "slipflow/constitutive.hpp"
#include "slipflow/geometry.hpp"

namespace slipflow {

enum class NoiseFamily { LinearMomentum, DensityOnly, Off };

/// Truncated cylindrical Wiener description: K modes with amplitudes
/// g_k = g0 (k+1)^{-2} (square-summable), bounded spatial profiles sigma_k
/// and per-mode directions. The built-in coefficient families are
///   F_k(rho, v) = g_k sigma_k(x) (c1 d_k + c2 v),
/// so G_k = rho F_k satisfies |G_k| <= g_k (rho + |q|) and the gradient
/// bound whenever c1 + c2 <= 1 and |sigma_k| <= 1.
struct NoiseModel {
    int K = 0;
    NoiseFamily family = NoiseFamily::Off;
    double g0 = 0.0;
    double c1 = 0.5;
    double c2 = 0.5;
    std::vector<double> gk;
    std::vector<GridField> sigma;  // scalar profiles at cell centers
    std::vector<int> dir;          // 0: e_x, 1: e_y

    bool active() const { return family != NoiseFamily::Off && K > 0 && g0 != 0.0; }
    /// Explicit uniform bound f_{k,eps} = g_k (1 + 1/eps) for the built-ins.
    double f_bound(int k, double eps) const { return gk[k] * (1.0 + 1.0 / eps); }
};

NoiseModel build_noise_model(const ChannelDomain& dom, int K, NoiseFamily family, double g0,
                             double c1 = 0.5, double c2 = 0.5);

/// Regularized coefficient G_{k,eps}(rho, rho u) as a grid field:
/// G_{k,eps} = chi(eps/rho - 1) chi(|u| - 1/eps) rho F_k(rho, u).
VecField evaluate_coefficient(const GridField& rho, const VecField& u, int k,
                              const NoiseModel& model, double eps);

/// Pointwise F_{k,eps}(rho, u); used for the bound audits.
Vec2 coefficient_F(const NoiseModel& model, int k, double eps, double sigma_val, int dir,
                   double rho, const Vec2& u);

/// Counter-based Gaussian draw: deterministic in (seed, stream id).
double counter_gaussian(uint64_t seed, uint64_t k, uint64_t level, uint64_t n);

/// Dyadically refinable family of Wiener increments for K modes over n0
/// outer steps of size h0. Refinement is a keyed Brownian-bridge split, so
/// coarse increments are exactly the sums of their children and repeated
/// refinement commutes.
struct WienerPath {
    uint64_t seed = 0;
    int K = 0;
    double h0 = 0.0;
    int n0 = 0;
    int level = 0;
    std::vector<double> dW;  // [step * K + k] at the current resolution

    int nsteps() const { return n0 << level; }
    double dt() const { return h0 / static_cast<double>(1 << level); }
};

WienerPath make_wiener_path(uint64_t seed, int K, double h0, int n0);
WienerPath refine_brownian_path(const WienerPath& path, int levels);

/// Increment vector of step n at the path's current resolution.
std::vector<double> sample_increments(const WienerPath& path, int n);

struct ItoCorrection {
    double value = 0.0;  // (1/2) sum_k int G_{k,eps} . M^{-1}[rho] [G_{k,eps}]_m^* dx
    double upper = 0.0;  // (1/2) sum_k int rho |F_{k,eps}|^2 dx
};

/// Both sides of the quadratic-variation sandwich, for auditing
/// 0 <= value <= upper at every step.
ItoCorrection ito_correction(const GridField& rho, const VelocityCoeffs& u,
                             const NoiseModel& model, const SimParams& p,
                             const GalerkinSpace& space, const MassOperator& mass);

/// Dual projections [G_{k,eps}]_m^* for all modes (reused by the integrator).
std::vector<DualVector> noise_projections(const GridField& rho, const VecField& u_field,
                                          const NoiseModel& model, double eps,
                                          const GalerkinSpace& space);

}  // namespace slipflow
