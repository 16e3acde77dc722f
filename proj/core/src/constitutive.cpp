#include "slipflow/constitutive.hpp"

#include "slipflow/friction.hpp"

namespace slipflow {

void SimParams::validate() const {
    require(gamma > 1.0, "gamma > 1 violated");
    require(a > 0.0, "a > 0 violated");
    require(mu > 0.0, "mu > 0 violated");
    require(lambda >= 0.0, "lambda >= 0 violated");
    require(delta > 0.0 && delta <= 1.0, "delta in (0,1] violated");
    require(Gamma >= std::max(6.0, gamma), "Gamma >= max(6,gamma) violated");
    require(epsilon > 0.0 && epsilon <= 1.0, "epsilon in (0,1] violated");
    require(alpha > 0.0 && alpha <= 1.0, "alpha in (0,1] violated");
    require(R > 0.0, "R > 0 violated");
    require(m >= 1, "m >= 1 violated");
    require(h > 0.0, "h > 0 violated");
}

double pressure_value(double rho, const SimParams& p) {
    if (rho < 0.0) throw std::domain_error("pressure: negative density");
    double base = p.a * std::pow(rho, p.gamma);
    if (p.delta == 0.0) return base;
    return base + p.delta * (rho + std::pow(rho, p.Gamma));
}

GridField pressure(const GridField& rho, const SimParams& p) {
    GridField out(rho.nx, rho.ny);
    for (size_t t = 0; t < rho.size(); ++t) out.a[t] = pressure_value(rho.a[t], p);
    return out;
}

double pressure_potential_value(double rho, const SimParams& p) {
    if (rho < 0.0) throw std::domain_error("pressure_potential: negative density");
    double base = p.a * (std::pow(rho, p.gamma) - rho) / (p.gamma - 1.0);
    if (p.delta == 0.0) return base;
    double rlog = rho > 0.0 ? rho * std::log(rho) : 0.0;
    return base + p.delta * (rlog + (std::pow(rho, p.Gamma) - rho) / (p.Gamma - 1.0));
}

GridField pressure_potential(const GridField& rho, const SimParams& p) {
    GridField out(rho.nx, rho.ny);
    for (size_t t = 0; t < rho.size(); ++t) out.a[t] = pressure_potential_value(rho.a[t], p);
    return out;
}

double pressure_potential_second(double rho, const SimParams& p) {
    if (rho <= 0.0) throw std::domain_error("pressure_potential_second: needs rho > 0");
    double pd_prime = p.a * p.gamma * std::pow(rho, p.gamma - 1.0) +
                      p.delta * (1.0 + p.Gamma * std::pow(rho, p.Gamma - 1.0));
    return pd_prime / rho;
}

void stress_entries(double gxx, double gxy, double gyx, double gyy, const SimParams& p,
                    double& sxx, double& sxy, double& syy) {
    double div = gxx + gyy;
    sxx = p.mu * (2.0 * gxx - (2.0 / 3.0) * div) + p.lambda * div;
    syy = p.mu * (2.0 * gyy - (2.0 / 3.0) * div) + p.lambda * div;
    sxy = p.mu * (gxy + gyx);
}

Tensor2Field viscous_stress(const GridField& gxx, const GridField& gxy, const GridField& gyx,
                            const GridField& gyy, const SimParams& p) {
    Tensor2Field s;
    s.xx = GridField(gxx.nx, gxx.ny);
    s.xy = GridField(gxx.nx, gxx.ny);
    s.yx = GridField(gxx.nx, gxx.ny);
    s.yy = GridField(gxx.nx, gxx.ny);
    for (size_t t = 0; t < gxx.size(); ++t) {
        double sxx, sxy, syy;
        stress_entries(gxx.a[t], gxy.a[t], gyx.a[t], gyy.a[t], p, sxx, sxy, syy);
        s.xx.a[t] = sxx;
        s.xy.a[t] = sxy;
        s.yx.a[t] = sxy;
        s.yy.a[t] = syy;
    }
    return s;
}

double chi_cutoff(double z) {
    if (z <= 0.0) return 1.0;
    if (z >= 1.0) return 0.0;
    double fa = std::exp(-1.0 / (1.0 - z));
    double fb = std::exp(-1.0 / z);
    return fa / (fa + fb);
}

CutoffResult cutoff_velocity(const VelocityCoeffs& v, double R) {
    require(R > 0.0, "cutoff radius must be positive");
    if (std::isinf(R)) return {v, 1.0};
    double chi = chi_cutoff(v.norm() - R);
    if (chi == 1.0) return {v, 1.0};
    return {VelocityCoeffs(chi * v.c), chi};
}

MassOperator::MassOperator(const GridField& rho, const GalerkinSpace& space) : space_(space) {
    const int m = space.dim();
    const int nc = space.ncells();
    require(rho.nx == space.domain().Nx() && rho.ny == space.domain().Ny(),
            "mass operator: density shape mismatch");
    rho_min_ = rho.a[0];
    for (double v : rho.a) rho_min_ = std::min(rho_min_, v);
    check_scheme(rho_min_ > 0.0, "mass operator: density not bounded below by a positive constant");

    M_.resize(m, m);
    const double w = space.domain().cell_weight();
    for (int i = 0; i < m; ++i) {
        const double* pxi = &space.phi_x()[static_cast<size_t>(i) * nc];
        const double* pyi = &space.phi_y()[static_cast<size_t>(i) * nc];
        for (int j = i; j < m; ++j) {
            // modes of different components never overlap
            if (space.modes()[i].comp != space.modes()[j].comp) {
                M_(i, j) = M_(j, i) = 0.0;
                continue;
            }
            const double* pxj = &space.phi_x()[static_cast<size_t>(j) * nc];
            const double* pyj = &space.phi_y()[static_cast<size_t>(j) * nc];
            double s = 0.0;
            for (int t = 0; t < nc; ++t) s += rho.a[t] * (pxi[t] * pxj[t] + pyi[t] * pyj[t]);
            M_(i, j) = M_(j, i) = s * w;
        }
    }
    llt_.compute(M_);
    check_scheme(llt_.info() == Eigen::Success, "mass operator: factorization failed");
}

DualVector MassOperator::apply(const VelocityCoeffs& v) const {
    require(v.size() == M_.rows(), "mass operator apply: size mismatch");
    return DualVector(M_ * v.c);
}

VelocityCoeffs MassOperator::solve(const DualVector& q) const {
    require(q.size() == M_.rows(), "mass operator solve: size mismatch");
    Eigen::VectorXd x = llt_.solve(q.q);
    double qn = q.q.norm();
    double res = (M_ * x - q.q).norm();
    check_scheme(res <= 1e-12 * std::max(qn, 1e-300),
                 "mass operator solve: residual above tolerance");
    return VelocityCoeffs(x);
}

DualVector mass_operator_apply(const GridField& rho, const VelocityCoeffs& v,
                               const GalerkinSpace& space) {
    const int m = space.dim();
    const int nc = space.ncells();
    require(v.size() == m, "mass_operator_apply: size mismatch");
    require(rho.nx == space.domain().Nx() && rho.ny == space.domain().Ny(),
            "mass_operator_apply: density shape mismatch");
    for (double r : rho.a)
        if (r < 0.0) throw std::domain_error("mass_operator_apply: negative density");
    VecField u = space.velocity_field(v);
    Eigen::VectorXd q(m);
    const double w = space.domain().cell_weight();
    for (int j = 0; j < m; ++j) {
        const double* px = &space.phi_x()[static_cast<size_t>(j) * nc];
        const double* py = &space.phi_y()[static_cast<size_t>(j) * nc];
        KahanSum s;
        for (int t = 0; t < nc; ++t) s.add(rho.a[t] * (u.x.a[t] * px[t] + u.y.a[t] * py[t]));
        q[j] = s.value() * w;
    }
    return DualVector(q);
}

VelocityCoeffs mass_operator_solve(const GridField& rho, const DualVector& q,
                                   const GalerkinSpace& space) {
    MassOperator op(rho, space);
    return op.solve(q);
}

DriftResult drift_functional(const GridField& rho, const VelocityCoeffs& v, const SimParams& p,
                             const GalerkinSpace& space, const WallField& g) {
    const ChannelDomain& dom = space.domain();
    const int m = space.dim();
    const int nc = space.ncells();
    require(rho.nx == dom.Nx() && rho.ny == dom.Ny(), "drift: density shape mismatch");
    require(v.size() == m, "drift: coefficient length mismatch");
    for (int i = 0; i < dom.Nx(); ++i)
        require(g.bottom[i] >= 0.0 && g.top[i] >= 0.0, "drift: friction modulus must be >= 0");

    CutoffResult cut = cutoff_velocity(v, p.R);
    DriftResult out;
    out.chi = cut.chi;

    VecField uf = space.velocity_field(v);
    VecField cf = space.velocity_field(cut.v);
    GridField gxx, gxy, gyx, gyy;
    space.velocity_gradient(v, gxx, gxy, gyx, gyy);
    GridField pd = pressure(rho, p);

    // pointwise stress entries
    std::vector<double> sxx(nc), sxy(nc), syy(nc);
    for (int t = 0; t < nc; ++t)
        stress_entries(gxx.a[t], gxy.a[t], gyx.a[t], gyy.a[t], p, sxx[t], sxy[t], syy[t]);

    for (size_t t = 0; t < rho.size(); ++t) {
        check_scheme(std::isfinite(rho.a[t]) && std::isfinite(uf.x.a[t]) && std::isfinite(uf.y.a[t]),
                     "drift: non-finite field values");
    }

    Eigen::VectorXd conv(m), pres(m), visc(m), epsv(m);
    const double w = dom.cell_weight();
    for (int j = 0; j < m; ++j) {
        const size_t off = static_cast<size_t>(j) * nc;
        const double* dxx = &space.dphi_x_dx()[off];
        const double* dxy = &space.dphi_x_dy()[off];
        const double* dyx = &space.dphi_y_dx()[off];
        const double* dyy = &space.dphi_y_dy()[off];
        const double* lx = &space.lap_x()[off];
        const double* ly = &space.lap_y()[off];
        KahanSum sc, sp, sv, se;
        for (int t = 0; t < nc; ++t) {
            // (rho [v]_R (x) v) : grad phi, transport slot = cut velocity
            sc.add(rho.a[t] * (cf.x.a[t] * (uf.x.a[t] * dxx[t] + uf.y.a[t] * dyx[t]) +
                               cf.y.a[t] * (uf.x.a[t] * dxy[t] + uf.y.a[t] * dyy[t])));
            sp.add(pd.a[t] * (dxx[t] + dyy[t]));
            sv.add(sxx[t] * dxx[t] + sxy[t] * (dxy[t] + dyx[t]) + syy[t] * dyy[t]);
            se.add(rho.a[t] * (uf.x.a[t] * lx[t] + uf.y.a[t] * ly[t]));
        }
        conv[j] = sc.value() * w;
        pres[j] = cut.chi * sp.value() * w;
        visc[j] = -sv.value() * w;
        epsv[j] = p.epsilon * se.value() * w;
    }

    WallTrace tr = trace_boundary(v, space);
    FrictionFunctional fb = friction_functional(tr, g, p.alpha, space, p.boundary_mode);

    out.convection = DualVector(conv);
    out.pressure = DualVector(pres);
    out.viscous = DualVector(visc);
    out.eps_viscous = DualVector(epsv);
    out.boundary = fb.functional;
    out.boundary_dissipation = fb.dissipation;
    out.total = DualVector(conv + pres + visc + epsv + fb.functional.q);
    return out;
}

}  // namespace slipflow
