#include "slipflow/basis.hpp"

#include <algorithm>
#include <tuple>

namespace slipflow {

namespace {

struct XFactor {
    double val, dval, ddval;
};

// Normalized Fourier factor in x on (0, Lx).
XFactor x_factor(int k, int parity, double x, double Lx) {
    if (k == 0) {
        double n = 1.0 / std::sqrt(Lx);
        return {n, 0.0, 0.0};
    }
    double n = std::sqrt(2.0 / Lx);
    double w = 2.0 * M_PI * k / Lx;
    double arg = 2.0 * k * x / Lx;  // in units of pi
    if (parity == 0) {
        double c = cos_pi(arg), s = sin_pi(arg);
        return {n * c, -n * w * s, -n * w * w * c};
    }
    double c = cos_pi(arg), s = sin_pi(arg);
    return {n * s, n * w * c, -n * w * w * s};
}

// Normalized y profile: cosine family (j >= 0) or sine family (j >= 1).
XFactor y_factor(int j, bool sine, double y) {
    if (!sine && j == 0) return {1.0, 0.0, 0.0};
    double n = std::sqrt(2.0);
    double w = M_PI * j;
    double c = cos_pi(j * y), s = sin_pi(j * y);
    if (sine) return {n * s, n * w * c, -n * w * w * s};
    return {n * c, -n * w * s, -n * w * w * c};
}

std::vector<BasisMode> enumerate_modes(const ChannelDomain& dom, bool interior_only) {
    // Caps keep all Gram-matrix integrands below the grid Nyquist frequency.
    const int kmax = (dom.Nx() - 1) / 2;
    const int jmax = dom.Ny() - 1;
    std::vector<BasisMode> all;
    for (int k = 0; k <= kmax; ++k) {
        for (int parity = 0; parity < (k == 0 ? 1 : 2); ++parity) {
            for (int j = 0; j <= jmax; ++j) {
                if (j >= (interior_only ? 1 : 0)) all.push_back({0, k, parity, j});
                if (j >= 1) all.push_back({1, k, parity, j});
            }
        }
    }
    std::sort(all.begin(), all.end(), [](const BasisMode& a, const BasisMode& b) {
        return std::tuple(a.total(), a.comp, a.parity, a.k) <
               std::tuple(b.total(), b.comp, b.parity, b.k);
    });
    return all;
}

}  // namespace

int GalerkinSpace::max_dim(const ChannelDomain& dom, bool interior_only) {
    return static_cast<int>(enumerate_modes(dom, interior_only).size());
}

void GalerkinSpace::mode_eval(const BasisMode& md, double x, double y, double& vx, double& vy,
                              double* grad4, double* lap2) const {
    XFactor fx = x_factor(md.k, md.parity, x, dom_.Lx());
    bool sine = (md.comp == 1) || interior_only_;
    XFactor fy = y_factor(md.j, sine, y);
    double v = fx.val * fy.val;
    double ddx = fx.dval * fy.val;
    double ddy = fx.val * fy.dval;
    double lap = fx.ddval * fy.val + fx.val * fy.ddval;
    if (md.comp == 0) {
        vx = v;
        vy = 0.0;
        if (grad4) {
            grad4[0] = ddx;
            grad4[1] = ddy;
            grad4[2] = 0.0;
            grad4[3] = 0.0;
        }
        if (lap2) {
            lap2[0] = lap;
            lap2[1] = 0.0;
        }
    } else {
        vx = 0.0;
        vy = v;
        if (grad4) {
            grad4[0] = 0.0;
            grad4[1] = 0.0;
            grad4[2] = ddx;
            grad4[3] = ddy;
        }
        if (lap2) {
            lap2[0] = 0.0;
            lap2[1] = lap;
        }
    }
}

GalerkinSpace::GalerkinSpace(const ChannelDomain& dom, int m, bool interior_only)
    : dom_(dom), m_(m), interior_only_(interior_only) {
    require(m >= 1, "Galerkin dimension m must be >= 1");
    auto all = enumerate_modes(dom, interior_only);
    require(m <= static_cast<int>(all.size()),
            "Galerkin dimension m exceeds the " + std::to_string(all.size()) +
                " modes representable on this grid");
    modes_.assign(all.begin(), all.begin() + m);

    const int nc = ncells();
    const int nx = dom_.Nx(), ny = dom_.Ny();
    phi_x_.resize(static_cast<size_t>(m) * nc);
    phi_y_.resize(static_cast<size_t>(m) * nc);
    dxx_.resize(static_cast<size_t>(m) * nc);
    dxy_.resize(static_cast<size_t>(m) * nc);
    dyx_.resize(static_cast<size_t>(m) * nc);
    dyy_.resize(static_cast<size_t>(m) * nc);
    lap_x_.resize(static_cast<size_t>(m) * nc);
    lap_y_.resize(static_cast<size_t>(m) * nc);
    wt_bot_.resize(static_cast<size_t>(m) * nx);
    wt_top_.resize(static_cast<size_t>(m) * nx);
    ws_bot_.resize(static_cast<size_t>(m) * nx);
    ws_top_.resize(static_cast<size_t>(m) * nx);
    xface_ux_.resize(static_cast<size_t>(m) * nx * ny);
    yface_uy_.resize(static_cast<size_t>(m) * nx * (ny + 1));

    double grad4[4], lap2[2], vx, vy;
    for (int q = 0; q < m; ++q) {
        const BasisMode& md = modes_[q];
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                size_t idx = static_cast<size_t>(q) * nc + static_cast<size_t>(j) * nx + i;
                mode_eval(md, dom_.xc(i), dom_.yc(j), vx, vy, grad4, lap2);
                phi_x_[idx] = vx;
                phi_y_[idx] = vy;
                dxx_[idx] = grad4[0];
                dxy_[idx] = grad4[1];
                dyx_[idx] = grad4[2];
                dyy_[idx] = grad4[3];
                lap_x_[idx] = lap2[0];
                lap_y_[idx] = lap2[1];
            }
        }
        for (int i = 0; i < nx; ++i) {
            size_t widx = static_cast<size_t>(q) * nx + i;
            mode_eval(md, dom_.xc(i), 0.0, vx, vy, grad4);
            wt_bot_[widx] = vx;
            ws_bot_[widx] = grad4[1] + grad4[2];
            mode_eval(md, dom_.xc(i), 1.0, vx, vy, grad4);
            wt_top_[widx] = vx;
            ws_top_[widx] = grad4[1] + grad4[2];
        }
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                mode_eval(md, i * dom_.dx(), dom_.yc(j), vx, vy);
                xface_ux_[static_cast<size_t>(q) * nx * ny + static_cast<size_t>(j) * nx + i] = vx;
            }
        }
        for (int j = 0; j <= ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                mode_eval(md, dom_.xc(i), j * dom_.dy(), vx, vy);
                yface_uy_[static_cast<size_t>(q) * nx * (ny + 1) + static_cast<size_t>(j) * nx + i] = vy;
            }
        }
    }
}

GalerkinSpace build_velocity_space(const ChannelDomain& dom, int m, bool interior_only) {
    return GalerkinSpace(dom, m, interior_only);
}

VecField GalerkinSpace::velocity_field(const VelocityCoeffs& u) const {
    require(u.size() == m_, "velocity_field: coefficient length mismatch");
    VecField out(dom_.Nx(), dom_.Ny());
    const int nc = ncells();
    for (int q = 0; q < m_; ++q) {
        double cq = u.c[q];
        if (cq == 0.0) continue;
        const double* px = &phi_x_[static_cast<size_t>(q) * nc];
        const double* py = &phi_y_[static_cast<size_t>(q) * nc];
        for (int t = 0; t < nc; ++t) {
            out.x.a[t] += cq * px[t];
            out.y.a[t] += cq * py[t];
        }
    }
    return out;
}

void GalerkinSpace::velocity_gradient(const VelocityCoeffs& u, GridField& gxx, GridField& gxy,
                                      GridField& gyx, GridField& gyy) const {
    require(u.size() == m_, "velocity_gradient: coefficient length mismatch");
    const int nc = ncells();
    gxx = dom_.make_scalar();
    gxy = dom_.make_scalar();
    gyx = dom_.make_scalar();
    gyy = dom_.make_scalar();
    for (int q = 0; q < m_; ++q) {
        double cq = u.c[q];
        if (cq == 0.0) continue;
        const double* a = &dxx_[static_cast<size_t>(q) * nc];
        const double* b = &dxy_[static_cast<size_t>(q) * nc];
        const double* c2 = &dyx_[static_cast<size_t>(q) * nc];
        const double* d = &dyy_[static_cast<size_t>(q) * nc];
        for (int t = 0; t < nc; ++t) {
            gxx.a[t] += cq * a[t];
            gxy.a[t] += cq * b[t];
            gyx.a[t] += cq * c2[t];
            gyy.a[t] += cq * d[t];
        }
    }
}

GridField GalerkinSpace::divergence_field(const VelocityCoeffs& u) const {
    require(u.size() == m_, "divergence_field: coefficient length mismatch");
    GridField out = dom_.make_scalar();
    const int nc = ncells();
    for (int q = 0; q < m_; ++q) {
        double cq = u.c[q];
        if (cq == 0.0) continue;
        const double* a = &dxx_[static_cast<size_t>(q) * nc];
        const double* d = &dyy_[static_cast<size_t>(q) * nc];
        for (int t = 0; t < nc; ++t) out.a[t] += cq * (a[t] + d[t]);
    }
    return out;
}

double GalerkinSpace::divergence_sup(const VelocityCoeffs& u) const {
    GridField div = divergence_field(u);
    double s = 0.0;
    for (double v : div.a) s = std::max(s, std::abs(v));
    return s;
}

VelocityCoeffs project_velocity(const VecField& field, const GalerkinSpace& space) {
    const ChannelDomain& dom = space.domain();
    require(field.x.nx == dom.Nx() && field.x.ny == dom.Ny(), "project_velocity: shape mismatch");
    const int nc = space.ncells();
    Eigen::VectorXd c(space.dim());
    for (int q = 0; q < space.dim(); ++q) {
        const double* px = &space.phi_x()[static_cast<size_t>(q) * nc];
        const double* py = &space.phi_y()[static_cast<size_t>(q) * nc];
        KahanSum s;
        for (int t = 0; t < nc; ++t) s.add(field.x.a[t] * px[t] + field.y.a[t] * py[t]);
        c[q] = s.value() * dom.cell_weight();
    }
    return VelocityCoeffs(c);
}

WallTrace trace_boundary(const VelocityCoeffs& u, const GalerkinSpace& space) {
    require(u.size() == space.dim(), "trace_boundary: coefficient length mismatch");
    const int nx = space.domain().Nx();
    WallTrace tr;
    tr.tangential = WallField(nx);
    tr.normal = WallField(nx);
    for (int q = 0; q < space.dim(); ++q) {
        double cq = u.c[q];
        if (cq == 0.0) continue;
        const double* b = &space.wall_tangential_bottom()[static_cast<size_t>(q) * nx];
        const double* t = &space.wall_tangential_top()[static_cast<size_t>(q) * nx];
        for (int i = 0; i < nx; ++i) {
            tr.tangential.bottom[i] += cq * b[i];
            tr.tangential.top[i] += cq * t[i];
        }
    }
    // the y-component of every mode carries sin(j pi y), which is exactly
    // zero on the walls, so the normal trace is zero by construction
    return tr;
}

}  // namespace slipflow
