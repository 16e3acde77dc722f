#pragma once

#include <Eigen/Dense>

#include "slipflow/basis.hpp"
#include "slipflow/constitutive.hpp"

namespace slipflow {

/// Convex C^1 approximation of |v|: |v| outside the ball of radius alpha,
/// |v|^2/(2 alpha) + alpha/2 inside. Satisfies |j_alpha(v) - |v|| <= alpha.
double j_alpha(const Vec2& v, double alpha);

/// v/|v| outside, v/alpha inside; |grad j_alpha| <= 1 and grad j_alpha(v).v >= 0.
Vec2 grad_j_alpha(const Vec2& v, double alpha);

struct FrictionFunctional {
    DualVector functional;  // entries -int g b(u) . phi_j dGamma
    double dissipation;     // int g b(u) . u dGamma >= 0
};

/// Boundary functional of the weak form for a given tangential trace;
/// b = grad j_alpha in friction mode, b = id in Navier mode.
FrictionFunctional friction_functional(const WallTrace& trace, const WallField& g, double alpha,
                                       const GalerkinSpace& space, BoundaryMode mode);

struct FrictionLawResidual {
    double r1;  // max over wall nodes of max(|(Tn)_t| - g, 0)
    double r2;  // max over wall nodes of |(Tn)_t u_t + g |u_t||
};

/// Complementarity residuals of the friction law. The tangential traction is
/// reconstructed from the analytic basis gradients at the wall nodes:
/// (Tn)_t = mu (d u_x/dy + d u_y/dx), evaluated on the wall.
FrictionLawResidual friction_law_residual(const VelocityCoeffs& u, const SimParams& p,
                                          const WallField& g, const GalerkinSpace& space);

/// Loads a per-wall friction modulus from a two-column text table
/// (arc-length coordinate, value), linearly interpolated onto the wall nodes.
std::vector<double> load_g_table(const std::string& path, const ChannelDomain& dom);

}  // namespace slipflow
