#pragma once

#include <vector>

#include "slipflow/common.hpp"

namespace slipflow {

/// Scalar field on the cell centers of a uniform grid, row-major in x.
struct GridField {
    int nx = 0;
    int ny = 0;
    std::vector<double> a;

    GridField() = default;
    GridField(int nx_, int ny_, double fill = 0.0)
        : nx(nx_), ny(ny_), a(static_cast<size_t>(nx_) * ny_, fill) {}

    double& at(int i, int j) { return a[static_cast<size_t>(j) * nx + i]; }
    double at(int i, int j) const { return a[static_cast<size_t>(j) * nx + i]; }
    size_t size() const { return a.size(); }
    bool same_shape(const GridField& o) const { return nx == o.nx && ny == o.ny; }
};

/// Two-component vector field at cell centers.
struct VecField {
    GridField x, y;

    VecField() = default;
    VecField(int nx, int ny) : x(nx, ny), y(nx, ny) {}
    bool same_shape(const VecField& o) const { return x.same_shape(o.x) && y.same_shape(o.y); }
};

/// Values on the wall nodes (one per cell column, both walls).
struct WallField {
    std::vector<double> bottom;
    std::vector<double> top;

    WallField() = default;
    explicit WallField(int nx, double fill = 0.0) : bottom(nx, fill), top(nx, fill) {}
    int nx() const { return static_cast<int>(bottom.size()); }
};

/// Periodic channel (0,Lx) x (0,1): periodic in x, solid walls at y=0 and
/// y=1. Midpoint quadrature on cell centers, trapezoid (= uniform, by
/// periodicity) on wall nodes.
class ChannelDomain {
public:
    ChannelDomain(double Lx, int Nx, int Ny);

    double Lx() const { return Lx_; }
    int Nx() const { return Nx_; }
    int Ny() const { return Ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double cell_weight() const { return dx_ * dy_; }
    double wall_weight() const { return dx_; }
    double area() const { return Lx_; }

    double xc(int i) const { return (i + 0.5) * dx_; }
    double yc(int j) const { return (j + 0.5) * dy_; }

    /// x positions of the wall nodes (same abscissae on both walls).
    const std::vector<double>& wall_x() const { return wall_x_; }

    GridField make_scalar(double fill = 0.0) const { return GridField(Nx_, Ny_, fill); }
    VecField make_vector() const { return VecField(Nx_, Ny_); }
    WallField make_wall(double fill = 0.0) const { return WallField(Nx_, fill); }

private:
    double Lx_;
    int Nx_, Ny_;
    double dx_, dy_;
    std::vector<double> wall_x_;
};

ChannelDomain build_channel_domain(double Lx, int Nx, int Ny);

/// Midpoint quadrature of a cell-centered integrand over the channel.
double integrate_interior(const ChannelDomain& dom, const GridField& f);

/// Weighted boundary quadrature sum_{walls} f * g over wall nodes.
double integrate_boundary(const ChannelDomain& dom, const WallField& f, const WallField& g);
double integrate_boundary(const ChannelDomain& dom, const WallField& f);

}  // namespace slipflow
