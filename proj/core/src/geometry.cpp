#include "slipflow/geometry.hpp"

namespace slipflow {

ChannelDomain::ChannelDomain(double Lx, int Nx, int Ny) : Lx_(Lx), Nx_(Nx), Ny_(Ny) {
    require(Lx > 0.0, "channel length Lx must be positive");
    require(Nx >= 4 && Ny >= 4, "grid needs Nx,Ny >= 4");
    dx_ = Lx_ / Nx_;
    dy_ = 1.0 / Ny_;
    wall_x_.resize(Nx_);
    for (int i = 0; i < Nx_; ++i) wall_x_[i] = xc(i);
}

ChannelDomain build_channel_domain(double Lx, int Nx, int Ny) {
    return ChannelDomain(Lx, Nx, Ny);
}

double integrate_interior(const ChannelDomain& dom, const GridField& f) {
    require(f.nx == dom.Nx() && f.ny == dom.Ny(), "integrate_interior: shape mismatch");
    KahanSum s;
    for (double v : f.a) s.add(v);
    return s.value() * dom.cell_weight();
}

double integrate_boundary(const ChannelDomain& dom, const WallField& f, const WallField& g) {
    require(f.nx() == dom.Nx() && g.nx() == dom.Nx(), "integrate_boundary: shape mismatch");
    KahanSum s;
    for (int i = 0; i < dom.Nx(); ++i) s.add(f.bottom[i] * g.bottom[i]);
    for (int i = 0; i < dom.Nx(); ++i) s.add(f.top[i] * g.top[i]);
    return s.value() * dom.wall_weight();
}

double integrate_boundary(const ChannelDomain& dom, const WallField& f) {
    require(f.nx() == dom.Nx(), "integrate_boundary: shape mismatch");
    KahanSum s;
    for (double v : f.bottom) s.add(v);
    for (double v : f.top) s.add(v);
    return s.value() * dom.wall_weight();
}

}  // namespace slipflow
