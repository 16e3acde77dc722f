#pragma once

#include <Eigen/Dense>
#include <limits>

#include "slipflow/basis.hpp"
#include "slipflow/geometry.hpp"

namespace slipflow {

enum class BoundaryMode { Friction, Navier };

/// All physical and approximation constants of the scheme in one record.
/// validate() enforces the run-level constraints; test code may build
/// unvalidated instances (e.g. delta = 0) to probe individual operators.
struct SimParams {
    double gamma = 1.4;    // adiabatic exponent, > 1
    double a = 1.0;        // pressure constant, > 0
    double mu = 0.1;       // shear viscosity, > 0
    double lambda = 0.0;   // bulk coefficient, >= 0
    double delta = 0.1;    // artificial-pressure weight, in (0,1]
    double Gamma = 6.0;    // artificial exponent, >= max(6, gamma)
    double epsilon = 0.01; // artificial viscosity, in (0,1]
    double alpha = 0.01;   // friction smoothing, in (0,1]
    double R = std::numeric_limits<double>::infinity();  // velocity cut-off radius
    int m = 24;            // Galerkin dimension
    double h = 0.01;       // outer time step
    BoundaryMode boundary_mode = BoundaryMode::Friction;

    bool R_infinite() const { return std::isinf(R); }
    void validate() const;
};

// --- pressure law and potential ---

/// p_delta(rho) = a rho^gamma + delta (rho + rho^Gamma), pointwise.
double pressure_value(double rho, const SimParams& p);
GridField pressure(const GridField& rho, const SimParams& p);

/// P_delta(rho) = rho * int_1^rho p_delta(z)/z^2 dz in closed form:
///   a (rho^gamma - rho)/(gamma-1) + delta [rho ln rho + (rho^Gamma - rho)/(Gamma-1)],
/// with rho ln rho extended by 0 at rho = 0.
double pressure_potential_value(double rho, const SimParams& p);
GridField pressure_potential(const GridField& rho, const SimParams& p);

/// P_delta''(rho) = p_delta'(rho)/rho; weights the epsilon-dissipation.
double pressure_potential_second(double rho, const SimParams& p);

// --- viscous stress ---

struct Tensor2Field {
    GridField xx, xy, yx, yy;
};

/// S(G) = mu (G + G^T - (2/3) tr(G) I) + lambda tr(G) I for a 2x2 gradient G.
/// The 3D constant 2/3 is kept as-is.
void stress_entries(double gxx, double gxy, double gyx, double gyy, const SimParams& p,
                    double& sxx, double& sxy, double& syy);
Tensor2Field viscous_stress(const GridField& gxx, const GridField& gxy, const GridField& gyx,
                            const GridField& gyy, const SimParams& p);

// --- velocity cut-off ---

/// Smooth transition: 1 on (-inf,0], 0 on [1,inf), chi(1/2) = 1/2.
double chi_cutoff(double z);

struct CutoffResult {
    VelocityCoeffs v;
    double chi;
};

/// [v]_R = chi(||v||_{V_m} - R) v. R = +inf yields chi = 1 and v bit-identically.
CutoffResult cutoff_velocity(const VelocityCoeffs& v, double R);

// --- finite-dimensional mass operator M[rho] ---

/// M[rho] v = [rho v]_m^*, assembled densely and factorized once per density.
class MassOperator {
public:
    MassOperator(const GridField& rho, const GalerkinSpace& space);

    DualVector apply(const VelocityCoeffs& v) const;
    /// Solves M x = q; throws SchemeError if the factorization residual
    /// exceeds 1e-12 ||q||.
    VelocityCoeffs solve(const DualVector& q) const;
    const Eigen::MatrixXd& matrix() const { return M_; }
    double rho_min() const { return rho_min_; }

private:
    const GalerkinSpace& space_;
    Eigen::MatrixXd M_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double rho_min_;
};

/// Entry j = int rho (v . phi_j) dx, assembled directly by quadrature.
DualVector mass_operator_apply(const GridField& rho, const VelocityCoeffs& v,
                               const GalerkinSpace& space);
VelocityCoeffs mass_operator_solve(const GridField& rho, const DualVector& q,
                                   const GalerkinSpace& space);

// --- drift functional N[rho] ---

struct DriftResult {
    DualVector total;
    DualVector convection;   // int rho [v]_R (x) v : grad phi
    DualVector pressure;     // chi int p_delta(rho) div phi
    DualVector viscous;      // -int S(grad v) : grad phi
    DualVector eps_viscous;  // eps int rho v . lap phi
    DualVector boundary;     // -int_walls g b(v) . phi
    double chi = 1.0;
    /// int_walls g b(v) . v dGamma >= 0 (friction or Navier dissipation).
    double boundary_dissipation = 0.0;
};

/// Weak-form assembly of N[rho](v) against every basis function, including
/// the boundary functional in the requested mode (b = grad j_alpha or id).
DriftResult drift_functional(const GridField& rho, const VelocityCoeffs& v, const SimParams& p,
                             const GalerkinSpace& space, const WallField& g);

}  // namespace slipflow
