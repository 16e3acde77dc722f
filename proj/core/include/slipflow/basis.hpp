#pragma once

#include <Eigen/Dense>
#include <vector>

#include "slipflow/geometry.hpp"

namespace slipflow {

using Vec2 = Eigen::Vector2d;

/// Coefficients of a velocity in V_m (orthonormal basis, so the V_m norm is
/// the Euclidean norm of the coefficients).
struct VelocityCoeffs {
    Eigen::VectorXd c;

    VelocityCoeffs() = default;
    explicit VelocityCoeffs(Eigen::VectorXd v) : c(std::move(v)) {}
    static VelocityCoeffs zero(int m) { return VelocityCoeffs(Eigen::VectorXd::Zero(m)); }
    int size() const { return static_cast<int>(c.size()); }
    double norm() const { return c.norm(); }
};

/// Element of V_m^*: entry j is the pairing <., phi_j>.
struct DualVector {
    Eigen::VectorXd q;

    DualVector() = default;
    explicit DualVector(Eigen::VectorXd v) : q(std::move(v)) {}
    static DualVector zero(int m) { return DualVector(Eigen::VectorXd::Zero(m)); }
    int size() const { return static_cast<int>(q.size()); }
};

/// One tensor mode of the channel basis.
///   comp 0: phi = ( f_k(x) * Y(y), 0 ),  Y = cos(j pi y) family (j >= 0);
///           interior spaces use Y = sin(j pi y) (j >= 1) instead.
///   comp 1: phi = ( 0, f_k(x) * sin(j pi y) ), j >= 1.
/// f_k is the normalized Fourier family in x (k = 0 constant; parity 0 = cos,
/// 1 = sin for k >= 1). Every mode has exactly zero normal trace, and the
/// tangential profiles of the default family have vanishing wall-normal
/// derivative, which the discrete energy balance depends on.
struct BasisMode {
    int comp;    // 0: x-component, 1: y-component
    int k;       // x frequency index
    int parity;  // 0 cos, 1 sin (x factor); k=0 has parity 0 only
    int j;       // y frequency index
    int total() const { return k + j; }
};

struct WallTrace {
    WallField tangential;
    WallField normal;  // identically zero by construction; kept for auditing
};

/// Finite-dimensional velocity space V_m on the channel with zero normal
/// trace, L^2-orthonormal under the midpoint quadrature. interior_only
/// selects the V_{0,m} family whose members vanish entirely on the walls.
class GalerkinSpace {
public:
    GalerkinSpace(const ChannelDomain& dom, int m, bool interior_only);

    const ChannelDomain& domain() const { return dom_; }
    int dim() const { return m_; }
    bool interior_only() const { return interior_only_; }
    const std::vector<BasisMode>& modes() const { return modes_; }

    /// Number of representable modes on this grid (caps from quadrature
    /// exactness below the Nyquist frequency).
    static int max_dim(const ChannelDomain& dom, bool interior_only);

    // --- cell-center tables, index [mode * ncells + cell] ---
    const std::vector<double>& phi_x() const { return phi_x_; }
    const std::vector<double>& phi_y() const { return phi_y_; }
    const std::vector<double>& dphi_x_dx() const { return dxx_; }
    const std::vector<double>& dphi_x_dy() const { return dxy_; }
    const std::vector<double>& dphi_y_dx() const { return dyx_; }
    const std::vector<double>& dphi_y_dy() const { return dyy_; }
    const std::vector<double>& lap_x() const { return lap_x_; }
    const std::vector<double>& lap_y() const { return lap_y_; }

    int ncells() const { return dom_.Nx() * dom_.Ny(); }

    // --- wall-node tables, index [mode * Nx + i] ---
    const std::vector<double>& wall_tangential_bottom() const { return wt_bot_; }
    const std::vector<double>& wall_tangential_top() const { return wt_top_; }
    /// d(phi_x)/dy + d(phi_y)/dx at the walls, the tangential traction
    /// factor (exactly zero for the default family).
    const std::vector<double>& wall_shear_bottom() const { return ws_bot_; }
    const std::vector<double>& wall_shear_top() const { return ws_top_; }

    // --- face tables for the finite-volume density solver ---
    /// phi_x at x-face centers (x = i*dx, y = yc(j)); index [mode*(Nx*Ny)+j*Nx+i].
    const std::vector<double>& xface_ux() const { return xface_ux_; }
    /// phi_y at y-face centers (x = xc(i), y = j*dy), j = 0..Ny;
    /// index [mode*(Nx*(Ny+1)) + j*Nx + i]. Wall rows are exact zeros.
    const std::vector<double>& yface_uy() const { return yface_uy_; }

    // --- field evaluation from coefficients ---
    VecField velocity_field(const VelocityCoeffs& u) const;
    /// Gradient components at cells: (d u_x/dx, d u_x/dy, d u_y/dx, d u_y/dy).
    void velocity_gradient(const VelocityCoeffs& u, GridField& gxx, GridField& gxy,
                           GridField& gyx, GridField& gyy) const;
    GridField divergence_field(const VelocityCoeffs& u) const;
    double divergence_sup(const VelocityCoeffs& u) const;

private:
    ChannelDomain dom_;
    int m_;
    bool interior_only_;
    std::vector<BasisMode> modes_;
    std::vector<double> phi_x_, phi_y_, dxx_, dxy_, dyx_, dyy_, lap_x_, lap_y_;
    std::vector<double> wt_bot_, wt_top_, ws_bot_, ws_top_;
    std::vector<double> xface_ux_, yface_uy_;

    void mode_eval(const BasisMode& md, double x, double y, double& vx, double& vy,
                   double* grad4 = nullptr, double* lap2 = nullptr) const;
};

GalerkinSpace build_velocity_space(const ChannelDomain& dom, int m, bool interior_only = false);

/// L^2 projection of a cell-centered field onto V_m by quadrature.
VelocityCoeffs project_velocity(const VecField& field, const GalerkinSpace& space);

/// Tangential boundary values of a V_m field; the normal component is
/// reported as exactly zero.
WallTrace trace_boundary(const VelocityCoeffs& u, const GalerkinSpace& space);

}  // namespace slipflow
