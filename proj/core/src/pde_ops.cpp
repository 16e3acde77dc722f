#include "slipflow/pde_ops.hpp"

#include <cmath>

namespace slipflow {

double SpectralField::kappa_x(int k) const {
    int kk = k <= nx / 2 ? k : k - nx;
    return 2.0 * M_PI * kk / Lx;
}

double SpectralField::kappa_y(int l) const {
    int ll = l <= ny / 2 ? l : l - ny;
    return 2.0 * M_PI * ll / Ly;
}

SpectralField analyze(const GridField& g, double Lx, double Ly) {
    SpectralField f;
    f.nx = g.nx;
    f.ny = g.ny;
    f.Lx = Lx;
    f.Ly = Ly;
    f.hat.assign(g.size(), 0.0);
    for (size_t t = 0; t < g.size(); ++t) f.hat[t] = g.a[t];
    Fft fx(g.nx), fy(g.ny);
    std::vector<std::complex<double>> col(g.ny);
    for (int j = 0; j < g.ny; ++j) fx.forward(&f.hat[static_cast<size_t>(j) * g.nx]);
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) col[j] = f.at(i, j);
        fy.forward(col.data());
        for (int j = 0; j < g.ny; ++j) f.at(i, j) = col[j];
    }
    // normalize so that hat holds amplitude coefficients
    double n = static_cast<double>(g.size());
    for (auto& c : f.hat) c /= n;
    return f;
}

GridField synthesize(const SpectralField& f) {
    GridField g(f.nx, f.ny);
    std::vector<std::complex<double>> buf = f.hat;
    Fft fx(f.nx), fy(f.ny);
    std::vector<std::complex<double>> col(f.ny);
    // inverse transform without the 1/n normalization (applied in analyze)
    for (int i = 0; i < f.nx; ++i) {
        for (int j = 0; j < f.ny; ++j) col[j] = buf[static_cast<size_t>(j) * f.nx + i];
        fy.inverse(col.data());
        for (int j = 0; j < f.ny; ++j) buf[static_cast<size_t>(j) * f.nx + i] = col[j] * static_cast<double>(f.ny);
    }
    for (int j = 0; j < f.ny; ++j) {
        auto* row = &buf[static_cast<size_t>(j) * f.nx];
        fx.inverse(row);
        for (int i = 0; i < f.nx; ++i) g.at(i, j) = (row[i] * static_cast<double>(f.nx)).real();
    }
    return g;
}

GridField extend_even_y(const GridField& g) {
    GridField out(g.nx, 2 * g.ny);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            out.at(i, j) = g.at(i, j);
            out.at(i, 2 * g.ny - 1 - j) = g.at(i, j);
        }
    }
    return out;
}

GridField restrict_to_channel(const GridField& t) {
    GridField out(t.nx, t.ny / 2);
    for (int j = 0; j < out.ny; ++j)
        for (int i = 0; i < t.nx; ++i) out.at(i, j) = t.at(i, j);
    return out;
}

SpectralField riesz_transform(const SpectralField& f, int i, int j) {
    require(i >= 0 && i < 2 && j >= 0 && j < 2, "riesz_transform: component out of range");
    SpectralField out = f;
    for (int l = 0; l < f.ny; ++l) {
        for (int k = 0; k < f.nx; ++k) {
            double kx = f.kappa_x(k), ky = f.kappa_y(l);
            double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) {
                out.at(k, l) = 0.0;
                continue;
            }
            double ki = i == 0 ? kx : ky;
            double kj = j == 0 ? kx : ky;
            out.at(k, l) = f.at(k, l) * (ki * kj / k2);
        }
    }
    return out;
}

std::array<SpectralField, 2> inverse_divergence(const SpectralField& f) {
    std::array<SpectralField, 2> out{f, f};
    for (int l = 0; l < f.ny; ++l) {
        for (int k = 0; k < f.nx; ++k) {
            double kx = f.kappa_x(k), ky = f.kappa_y(l);
            double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) {
                out[0].at(k, l) = 0.0;
                out[1].at(k, l) = 0.0;
                continue;
            }
            std::complex<double> m0(0.0, -kx / k2), m1(0.0, -ky / k2);
            out[0].at(k, l) = f.at(k, l) * m0;
            out[1].at(k, l) = f.at(k, l) * m1;
        }
    }
    return out;
}

SpectralField spectral_derivative(const SpectralField& f, int axis) {
    require(axis == 0 || axis == 1, "spectral_derivative: axis out of range");
    SpectralField out = f;
    for (int l = 0; l < f.ny; ++l) {
        for (int k = 0; k < f.nx; ++k) {
            double kk = axis == 0 ? f.kappa_x(k) : f.kappa_y(l);
            out.at(k, l) = f.at(k, l) * std::complex<double>(0.0, kk);
        }
    }
    return out;
}

GridField riesz_channel(const GridField& f, int i, int j, const ChannelDomain& dom) {
    SpectralField hat = analyze(extend_even_y(f), dom.Lx(), 2.0);
    return restrict_to_channel(synthesize(riesz_transform(hat, i, j)));
}

BogovskiiSolver::BogovskiiSolver(const ChannelDomain& dom) : dom_(dom), fft_(dom.Nx()) {
    const int nx = dom.Nx(), ny = dom.Ny();
    const double dy = dom.dy(), dx = dom.dx();
    const int nu = ny, nv = ny - 1, np = ny;
    const int n = nu + nv + np;
    lu_.reserve(nx);
    for (int k = 0; k < nx; ++k) {
        double theta = 2.0 * M_PI * k / nx;
        std::complex<double> Dk((std::cos(theta) - 1.0) / dx, std::sin(theta) / dx);
        double lam = (2.0 - 2.0 * std::cos(theta)) / (dx * dx);
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
        auto U = [&](int j) { return j; };
        auto V = [&](int jf) { return nu + (jf - 1); };  // interior faces jf = 1..ny-1
        auto P = [&](int j) { return nu + nv + j; };

        // stationarity in u: (lam + L_y^D) u + conj(Dk) p = 0
        for (int j = 0; j < ny; ++j) {
            double diag = lam + (j == 0 || j == ny - 1 ? 3.0 : 2.0) / (dy * dy);
            A(U(j), U(j)) = diag;
            if (j > 0) A(U(j), U(j - 1)) = -1.0 / (dy * dy);
            if (j < ny - 1) A(U(j), U(j + 1)) = -1.0 / (dy * dy);
            A(U(j), P(j)) = std::conj(Dk);
        }
        // stationarity in v: (lam + L_y) v + (p_{jf-1} - p_jf)/dy = 0
        for (int jf = 1; jf < ny; ++jf) {
            A(V(jf), V(jf)) = lam + 2.0 / (dy * dy);
            if (jf > 1) A(V(jf), V(jf - 1)) = -1.0 / (dy * dy);
            if (jf < ny - 1) A(V(jf), V(jf + 1)) = -1.0 / (dy * dy);
            A(V(jf), P(jf - 1)) = 1.0 / dy;
            A(V(jf), P(jf)) = -1.0 / dy;
        }
        // divergence constraints: Dk u_j + (v_{j+1} - v_j)/dy = f_j
        for (int j = 0; j < ny; ++j) {
            A(P(j), U(j)) = Dk;
            if (j + 1 <= ny - 1) A(P(j), V(j + 1)) = 1.0 / dy;
            if (j >= 1) A(P(j), V(j)) = -1.0 / dy;
        }
        if (k == 0) {
            // constraints are rank-deficient by one for the mean mode;
            // replace the last one (implied by compatibility) with a pressure pin
            A.row(P(ny - 1)).setZero();
            A(P(ny - 1), P(0)) = 1.0;
        }
        lu_.emplace_back(A);
    }
}

BogovskiiResult BogovskiiSolver::solve(const GridField& f, double p_exponent) const {
    const int nx = dom_.Nx(), ny = dom_.Ny();
    require(f.nx == nx && f.ny == ny, "bogovskii: shape mismatch");
    require(p_exponent > 1.0, "bogovskii: p exponent must exceed 1");

    // mean removal
    KahanSum ms;
    for (double v : f.a) ms.add(v);
    const double mean = ms.value() / f.size();

    // FFT rows of f - mean
    std::vector<std::complex<double>> fhat(static_cast<size_t>(nx) * ny);
    {
        std::vector<std::complex<double>> row(nx);
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) row[i] = f.at(i, j) - mean;
            fft_.forward(row.data());
            for (int i = 0; i < nx; ++i) fhat[static_cast<size_t>(j) * nx + i] = row[i];
        }
    }
    // enforce exact solvability of the k = 0 block
    {
        std::complex<double> s = 0.0;
        for (int j = 0; j < ny; ++j) s += fhat[static_cast<size_t>(j) * nx];
        s /= static_cast<double>(ny);
        for (int j = 0; j < ny; ++j) fhat[static_cast<size_t>(j) * nx] -= s;
    }

    const int nu = ny, nv = ny - 1;
    std::vector<std::complex<double>> uf(static_cast<size_t>(nx) * ny);        // x faces
    std::vector<std::complex<double>> vf(static_cast<size_t>(nx) * (ny + 1));  // y faces
    Eigen::VectorXcd rhs(nu + nv + ny), sol;
    for (int k = 0; k < nx; ++k) {
        rhs.setZero();
        for (int j = 0; j < ny; ++j) rhs(nu + nv + j) = fhat[static_cast<size_t>(j) * nx + k];
        if (k == 0) rhs(nu + nv + ny - 1) = 0.0;  // pinned pressure row
        sol = lu_[k].solve(rhs);
        for (int j = 0; j < ny; ++j) uf[static_cast<size_t>(j) * nx + k] = sol(j);
        for (int jf = 1; jf < ny; ++jf) vf[static_cast<size_t>(jf) * nx + k] = sol(nu + jf - 1);
    }

    // back to physical space (wall rows of vf stay exactly zero); the
    // forward transform was unnormalized, so the inverse's 1/n closes it
    {
        std::vector<std::complex<double>> row(nx);
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) row[i] = uf[static_cast<size_t>(j) * nx + i];
            fft_.inverse(row.data());
            for (int i = 0; i < nx; ++i) uf[static_cast<size_t>(j) * nx + i] = row[i];
        }
        for (int jf = 1; jf < ny; ++jf) {
            for (int i = 0; i < nx; ++i) row[i] = vf[static_cast<size_t>(jf) * nx + i];
            fft_.inverse(row.data());
            for (int i = 0; i < nx; ++i) vf[static_cast<size_t>(jf) * nx + i] = row[i];
        }
    }

    BogovskiiResult res;
    res.mean_removed = mean;
    res.u = dom_.make_vector();
    double divres = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int ir = (i + 1) % nx;
            double ux_l = uf[static_cast<size_t>(j) * nx + i].real();
            double ux_r = uf[static_cast<size_t>(j) * nx + ir].real();
            double vy_b = vf[static_cast<size_t>(j) * nx + i].real();
            double vy_t = vf[static_cast<size_t>(j + 1) * nx + i].real();
            res.u.x.at(i, j) = 0.5 * (ux_l + ux_r);
            res.u.y.at(i, j) = 0.5 * (vy_b + vy_t);
            double div = (ux_r - ux_l) / dom_.dx() + (vy_t - vy_b) / dom_.dy();
            divres = std::max(divres, std::abs(div - (f.at(i, j) - mean)));
        }
    }
    res.div_residual = divres;

    // walls: normal faces are pinned to zero, tangential ghosts reflect
    double trace = 0.0;
    for (int i = 0; i < nx; ++i) {
        trace = std::max(trace, std::abs(vf[static_cast<size_t>(0) * nx + i].real()));
        trace = std::max(trace, std::abs(vf[static_cast<size_t>(ny) * nx + i].real()));
    }
    res.wall_trace = trace;

    // W^{1,p} / L^p ratio from staggered differences
    const double pw = p_exponent;
    KahanSum unum, fnum;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int ir = (i + 1) % nx;
            double ux = res.u.x.at(i, j), uy = res.u.y.at(i, j);
            double dudx = (uf[static_cast<size_t>(j) * nx + ir].real() -
                           uf[static_cast<size_t>(j) * nx + i].real()) / dom_.dx();
            double dvdy = (vf[static_cast<size_t>(j + 1) * nx + i].real() -
                           vf[static_cast<size_t>(j) * nx + i].real()) / dom_.dy();
            // cross derivatives from cell-center differences with wall ghosts
            double up = j < ny - 1 ? res.u.x.at(i, j + 1) : -res.u.x.at(i, j);
            double um = j > 0 ? res.u.x.at(i, j - 1) : -res.u.x.at(i, j);
            double dudy = (up - um) / (2.0 * dom_.dy());
            double dvdx = (res.u.y.at(ir, j) - res.u.y.at((i + nx - 1) % nx, j)) / (2.0 * dom_.dx());
            double gn = std::sqrt(ux * ux + uy * uy) + std::sqrt(dudx * dudx + dudy * dudy +
                                                                 dvdx * dvdx + dvdy * dvdy);
            unum.add(std::pow(gn, pw));
            fnum.add(std::pow(std::abs(f.at(i, j) - mean), pw));
        }
    }
    double un = std::pow(unum.value() * dom_.cell_weight(), 1.0 / pw);
    double fn = std::pow(fnum.value() * dom_.cell_weight(), 1.0 / pw);
    res.norm_ratio = fn > 0.0 ? un / fn : 0.0;
    return res;
}

BogovskiiResult bogovskii_solve(const GridField& f, const ChannelDomain& dom, double p_exponent) {
    BogovskiiSolver solver(dom);
    return solver.solve(f, p_exponent);
}

PressureMomentReport pressure_moment_diagnostic(const TrajectoryRecord& rec,
                                                const SimSetup& setup, double beta) {
    require(!rec.snapshots.empty(), "pressure moment: record has no field snapshots");
    require(beta > 0.0, "pressure moment: beta must be positive");
    const ChannelDomain& dom = setup.domain;
    const GalerkinSpace& space = setup.space;
    const SimParams& p = setup.params;
    const double h = rec.h;
    const size_t nsnap = rec.snapshots.size();
    const double w = dom.cell_weight();

    BogovskiiSolver bog(dom);
    PressureMomentReport rep;

    // Pi_m Phi per snapshot
    std::vector<Eigen::VectorXd> avec(nsnap);
    for (size_t s = 0; s < nsnap; ++s) {
        const GridField& rho = rec.snapshots[s].rho;
        GridField b(rho.nx, rho.ny);
        for (size_t t = 0; t < rho.size(); ++t) b.a[t] = std::pow(rho.a[t], beta);
        BogovskiiResult br = bog.solve(b);
        avec[s] = project_velocity(br.u, space).c;

        GridField div = space.divergence_field(VelocityCoeffs(avec[s]));
        KahanSum gap;
        for (size_t t = 0; t < rho.size(); ++t) {
            double target = b.a[t] - br.mean_removed;
            gap.add((div.a[t] - target) * (div.a[t] - target));
        }
        rep.projection_gap = std::max(rep.projection_gap, std::sqrt(gap.value() * w));
    }

    KahanSum lhs, lhs_unprojected, flux, transport, friction, moment;
    double stoch = 0.0;
    for (size_t s = 0; s + 1 < nsnap; ++s) {
        const Snapshot& snap = rec.snapshots[s];
        VelocityCoeffs u(snap.u);
        CutoffResult cut = cutoff_velocity(u, p.R);
        GridField pd = pressure(snap.rho, p);

        GridField diva = space.divergence_field(VelocityCoeffs(avec[s]));
        KahanSum lp, lq, mom;
        double bmean = 0.0;
        {
            KahanSum bm;
            for (size_t t = 0; t < snap.rho.size(); ++t) bm.add(std::pow(snap.rho.a[t], beta));
            bmean = bm.value() / static_cast<double>(snap.rho.size());
        }
        for (size_t t = 0; t < snap.rho.size(); ++t) {
            double bval = std::pow(snap.rho.a[t], beta);
            lp.add(pd.a[t] * diva.a[t]);
            lq.add(pd.a[t] * (bval - bmean));
            mom.add((p.a * std::pow(snap.rho.a[t], p.gamma) +
                     p.delta * (snap.rho.a[t] + std::pow(snap.rho.a[t], p.Gamma))) *
                    bval);
        }
        lhs.add(h * cut.chi * lp.value() * w);
        lhs_unprojected.add(h * cut.chi * lq.value() * w);
        moment.add(h * mom.value() * w);

        DriftResult drift = drift_functional(snap.rho, u, p, space, setup.g);
        flux.add(h * (drift.convection.q + drift.viscous.q + drift.eps_viscous.q).dot(avec[s]));
        friction.add(h * drift.boundary.q.dot(avec[s]));

        DualVector mom_dual = mass_operator_apply(snap.rho, u, space);
        transport.add(mom_dual.q.dot(avec[s + 1] - avec[s]));

        if (setup.noise.active()) {
            VecField uf = space.velocity_field(u);
            std::vector<DualVector> proj =
                noise_projections(snap.rho, uf, setup.noise, p.epsilon, space);
            for (int k = 0; k < setup.noise.K; ++k)
                stoch += proj[k].q.dot(avec[s]) * rec.increments[s * setup.noise.K + k];
        }
    }

    DualVector m0 = mass_operator_apply(rec.snapshots.front().rho,
                                        VelocityCoeffs(rec.snapshots.front().u), space);
    DualVector mN = mass_operator_apply(rec.snapshots.back().rho,
                                        VelocityCoeffs(rec.snapshots.back().u), space);
    rep.boundary_time = mN.q.dot(avec.back()) - m0.q.dot(avec.front());
    rep.lhs = lhs.value();
    rep.lhs_unprojected = lhs_unprojected.value();
    rep.flux = flux.value();
    rep.transport = transport.value();
    rep.stochastic = stoch;
    rep.friction = friction.value();
    rep.moment_integral = moment.value();
    rep.residual = std::abs(rep.lhs - (rep.boundary_time - rep.flux - rep.transport -
                                       rep.stochastic - rep.friction));
    return rep;
}

GridField effective_viscous_flux(const GridField& rho, const VelocityCoeffs& u,
                                 const SimParams& p, const GalerkinSpace& space) {
    GridField div = space.divergence_field(u);
    GridField pd = pressure(rho, p);
    GridField out(rho.nx, rho.ny);
    const double eta = p.mu / 3.0 + p.lambda;
    for (size_t t = 0; t < rho.size(); ++t) out.a[t] = (eta + p.mu) * div.a[t] - pd.a[t];
    return out;
}

}  // namespace slipflow
