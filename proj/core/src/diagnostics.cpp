#include "slipflow/diagnostics.hpp"

#include <cmath>

namespace slipflow {

namespace {

double smooth_bump(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double smooth_bump_deriv(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    double d = 1.0 - s * s;
    return smooth_bump(s) * (-2.0 * s / (d * d));
}

/// Trapezoid rule over ledger rows.
double time_trapz(const std::vector<double>& f, double h) {
    if (f.size() < 2) return 0.0;
    KahanSum s;
    s.add(0.5 * f.front());
    for (size_t i = 1; i + 1 < f.size(); ++i) s.add(f[i]);
    s.add(0.5 * f.back());
    return s.value() * h;
}

/// int d_t(phi) F dt assembled from exact phi increments, so series that are
/// constant in time pair against phi(T) - phi(0) to machine precision.
double time_stieltjes(const TimeTest& phi, const std::vector<double>& times,
                      const std::vector<double>& F) {
    KahanSum s;
    for (size_t i = 0; i + 1 < F.size(); ++i) {
        double dphi = phi.phi(times[i + 1]) - phi.phi(times[i]);
        s.add(dphi * 0.5 * (F[i] + F[i + 1]));
    }
    return s.value();
}

/// The density solver's 5-point Laplacian (periodic in x, Neumann in y).
GridField discrete_laplacian(const GridField& rho, const ChannelDomain& dom) {
    const int nx = dom.Nx(), ny = dom.Ny();
    GridField out(nx, ny);
    const double ix2 = 1.0 / (dom.dx() * dom.dx());
    const double iy2 = 1.0 / (dom.dy() * dom.dy());
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int il = (i + nx - 1) % nx, ir = (i + 1) % nx;
            double lap = (rho.at(il, j) - 2.0 * rho.at(i, j) + rho.at(ir, j)) * ix2;
            double below = j > 0 ? rho.at(i, j - 1) : rho.at(i, j);
            double above = j < ny - 1 ? rho.at(i, j + 1) : rho.at(i, j);
            lap += (below - 2.0 * rho.at(i, j) + above) * iy2;
            out.at(i, j) = lap;
        }
    }
    return out;
}

}  // namespace

double total_energy(const GridField& rho, const VelocityCoeffs& u, const SimParams& p,
                    const GalerkinSpace& space) {
    VecField uf = space.velocity_field(u);
    KahanSum s;
    for (size_t t = 0; t < rho.size(); ++t)
        s.add(0.5 * rho.a[t] * (uf.x.a[t] * uf.x.a[t] + uf.y.a[t] * uf.y.a[t]) +
              pressure_potential_value(rho.a[t], p));
    return s.value() * space.domain().cell_weight();
}

std::vector<double> energy_balance_residual(const TrajectoryRecord& rec) {
    std::vector<double> out(rec.rows.size(), 0.0);
    if (rec.rows.empty()) return out;
    const double e0 = rec.rows[0].kinetic_energy + rec.rows[0].potential_energy;
    double diss = 0.0, corr = 0.0, mart = 0.0, work = 0.0;
    for (size_t n = 1; n < rec.rows.size(); ++n) {
        const LedgerRow& r = rec.rows[n];
        diss += r.visc_dissipation + r.eps_grad_u_dissipation + r.eps_pressure_dissipation +
                r.boundary_dissipation;
        corr += r.ito_correction;
        mart += r.martingale_increment;
        if (n < rec.force_work.size()) work += rec.force_work[n];
        out[n] = r.kinetic_energy + r.potential_energy + diss - e0 - corr - mart - work;
    }
    return out;
}

std::vector<double> energy_inequality_margin(const TrajectoryRecord& rec) {
    std::vector<double> out = energy_balance_residual(rec);
    for (double& v : out) v = -v;
    return out;
}

std::vector<TimeTest> catalogue_time_tests(double T) {
    std::vector<TimeTest> out;
    {
        double c = 0.5 * T, w = 0.35 * T;
        out.push_back({"bump-interior",
                       [c, w](double t) { return smooth_bump((t - c) / w); },
                       [c, w](double t) { return smooth_bump_deriv((t - c) / w) / w; }});
    }
    {
        double w = 0.8 * T;
        out.push_back({"bump-initial",
                       [w](double t) { return t >= 0.0 ? smooth_bump(t / w) : 0.0; },
                       [w](double t) { return t >= 0.0 ? smooth_bump_deriv(t / w) / w : 0.0; }});
    }
    return out;
}

std::vector<ScalarTest> catalogue_scalar_tests(const ChannelDomain& dom) {
    std::vector<ScalarTest> out;
    auto make = [&](const std::string& name, int kx, int jy) {
        ScalarTest t;
        t.name = name;
        t.psi = dom.make_scalar();
        t.grad_psi = dom.make_vector();
        double wx = 2.0 * M_PI * kx / dom.Lx();
        double wy = M_PI * jy;
        for (int j = 0; j < dom.Ny(); ++j) {
            for (int i = 0; i < dom.Nx(); ++i) {
                double cx = cos_pi(2.0 * kx * dom.xc(i) / dom.Lx());
                double sx = sin_pi(2.0 * kx * dom.xc(i) / dom.Lx());
                double cy = cos_pi(jy * dom.yc(j));
                double sy = sin_pi(jy * dom.yc(j));
                t.psi.at(i, j) = cx * cy;
                t.grad_psi.x.at(i, j) = -wx * sx * cy;
                t.grad_psi.y.at(i, j) = -wy * cx * sy;
            }
        }
        return t;
    };
    out.push_back(make("const", 0, 0));
    out.push_back(make("cosx", 1, 0));
    out.push_back(make("cosy", 0, 1));
    out.push_back(make("cosx-cosy", 1, 1));
    return out;
}

std::vector<MomentumTest> catalogue_momentum_tests(const GalerkinSpace& space) {
    std::vector<MomentumTest> out;
    const auto& modes = space.modes();
    if (space.interior_only()) {
        for (int q = 0; q < std::min(space.dim(), 3); ++q) {
            VelocityCoeffs a = VelocityCoeffs::zero(space.dim());
            a.c[q] = 1.0;
            out.push_back({"interior-mode-" + std::to_string(q), a});
        }
        return out;
    }
    int found_y = 0;
    for (int q = 0; q < space.dim() && found_y < 2; ++q) {
        if (modes[q].comp == 1) {
            VelocityCoeffs a = VelocityCoeffs::zero(space.dim());
            a.c[q] = 1.0;
            out.push_back({"ycomp-" + std::to_string(q), a});
            ++found_y;
        }
    }
    // cosine-difference pair in the x component: zero trace at both walls
    for (int q1 = 0; q1 < space.dim(); ++q1) {
        const BasisMode& m1 = modes[q1];
        if (m1.comp != 0 || m1.j < 1) continue;
        for (int q2 = q1 + 1; q2 < space.dim(); ++q2) {
            const BasisMode& m2 = modes[q2];
            if (m2.comp == 0 && m2.k == m1.k && m2.parity == m1.parity && m2.j == m1.j + 2) {
                VelocityCoeffs a = VelocityCoeffs::zero(space.dim());
                a.c[q1] = 1.0 / std::sqrt(2.0);
                a.c[q2] = -1.0 / std::sqrt(2.0);
                out.push_back({"xdiff-" + std::to_string(q1) + "-" + std::to_string(q2), a});
                break;
            }
        }
        if (out.size() >= 3) break;
    }
    require(!out.empty(), "momentum catalogue: m too small for zero-trace test functions");
    return out;
}

std::vector<RenormTest> catalogue_renorm_tests(double M) {
    require(M > 0.0, "renorm catalogue: M must be positive");
    std::vector<RenormTest> out;
    out.push_back({"identity", [](double z) { return z; }, [](double) { return 1.0; }});
    out.push_back({"const", [](double) { return 1.0; }, [](double) { return 0.0; }});
    out.push_back({"trunc",
                   [M](double z) {
                       if (z <= M) return z;
                       double s = std::min((z - M) / M, 1.0);
                       double s3 = s * s * s;
                       return M + M * (s - (s3 * s3 - 3.0 * s3 * s * s + 2.5 * s3 * s));
                   },
                   [M](double z) {
                       if (z <= M) return 1.0;
                       double s = (z - M) / M;
                       if (s >= 1.0) return 0.0;
                       double step = ((6.0 * s - 15.0) * s + 10.0) * s * s * s;
                       return 1.0 - step;
                   }});
    return out;
}

double weak_residual_continuity(const TrajectoryRecord& rec, const SimSetup& setup,
                                const TimeTest& phi, const ScalarTest& psi) {
    require(!rec.snapshots.empty(), "weak residual: record has no field snapshots");
    const ChannelDomain& dom = setup.domain;
    const GalerkinSpace& space = setup.space;
    const double h = rec.h;
    const size_t n = rec.snapshots.size();
    const double w = dom.cell_weight();

    std::vector<double> times(n), rho_psi(n), phi_term(n);
    for (size_t s = 0; s < n; ++s) {
        const Snapshot& snap = rec.snapshots[s];
        times[s] = snap.time;
        KahanSum mass_psi;
        for (size_t t = 0; t < snap.rho.size(); ++t) mass_psi.add(snap.rho.a[t] * psi.psi.a[t]);
        rho_psi[s] = mass_psi.value() * w;

        CutoffResult cut = cutoff_velocity(VelocityCoeffs(snap.u), setup.params.R);
        VecField uf = space.velocity_field(cut.v);
        GridField lap = discrete_laplacian(snap.rho, dom);
        KahanSum flux;
        for (size_t t = 0; t < snap.rho.size(); ++t) {
            flux.add(snap.rho.a[t] *
                         (uf.x.a[t] * psi.grad_psi.x.a[t] + uf.y.a[t] * psi.grad_psi.y.a[t]) +
                     setup.params.epsilon * lap.a[t] * psi.psi.a[t]);
        }
        phi_term[s] = phi.phi(snap.time) * flux.value() * w;
    }

    double res = time_stieltjes(phi, times, rho_psi) + phi.phi(0.0) * rho_psi[0] +
                 time_trapz(phi_term, h);
    return std::abs(res);
}

double weak_residual_momentum(const TrajectoryRecord& rec, const SimSetup& setup,
                              const TimeTest& phi, const MomentumTest& test) {
    require(!rec.snapshots.empty(), "weak residual: record has no field snapshots");
    const GalerkinSpace& space = setup.space;
    const double h = rec.h;
    const size_t n = rec.snapshots.size();

    std::vector<double> times(n), mom_a(n), phi_term(n);
    double stoch = 0.0;
    for (size_t s = 0; s < n; ++s) {
        const Snapshot& snap = rec.snapshots[s];
        VelocityCoeffs u(snap.u);
        times[s] = snap.time;
        DualVector mom = mass_operator_apply(snap.rho, u, space);
        mom_a[s] = mom.q.dot(test.a.c);
        DriftResult drift = drift_functional(snap.rho, u, setup.params, space, setup.g);
        phi_term[s] = phi.phi(snap.time) * drift.total.q.dot(test.a.c);
        if (setup.noise.active() && s + 1 < n) {
            VecField uf = space.velocity_field(u);
            std::vector<DualVector> proj =
                noise_projections(snap.rho, uf, setup.noise, setup.params.epsilon, space);
            for (int k = 0; k < setup.noise.K; ++k)
                stoch += phi.phi(snap.time) * proj[k].q.dot(test.a.c) *
                         rec.increments[s * setup.noise.K + k];
        }
    }

    double res = time_stieltjes(phi, times, mom_a) + phi.phi(0.0) * mom_a[0] +
                 time_trapz(phi_term, h) + stoch;
    return std::abs(res);
}

double renormalized_residual(const TrajectoryRecord& rec, const SimSetup& setup,
                             const RenormTest& b, const TimeTest& phi, const ScalarTest& psi) {
    require(!rec.snapshots.empty(), "renormalized residual: record has no field snapshots");
    const ChannelDomain& dom = setup.domain;
    const GalerkinSpace& space = setup.space;
    const double h = rec.h;
    const size_t n = rec.snapshots.size();
    const double w = dom.cell_weight();

    std::vector<double> times(n), b_psi_series(n), phi_term(n);
    for (size_t s = 0; s < n; ++s) {
        const Snapshot& snap = rec.snapshots[s];
        times[s] = snap.time;
        KahanSum b_psi;
        for (size_t t = 0; t < snap.rho.size(); ++t) b_psi.add(b.b(snap.rho.a[t]) * psi.psi.a[t]);
        b_psi_series[s] = b_psi.value() * w;

        CutoffResult cut = cutoff_velocity(VelocityCoeffs(snap.u), setup.params.R);
        VecField uf = space.velocity_field(cut.v);
        GridField div = space.divergence_field(cut.v);
        GridField lap = discrete_laplacian(snap.rho, dom);
        KahanSum rhs;
        for (size_t t = 0; t < snap.rho.size(); ++t) {
            double r = snap.rho.a[t];
            double bv = b.b(r), dbv = b.db(r);
            rhs.add(bv * (uf.x.a[t] * psi.grad_psi.x.a[t] + uf.y.a[t] * psi.grad_psi.y.a[t]) -
                    (dbv * r - bv) * div.a[t] * psi.psi.a[t] +
                    setup.params.epsilon * dbv * lap.a[t] * psi.psi.a[t]);
        }
        phi_term[s] = phi.phi(snap.time) * rhs.value() * w;
    }

    double res = time_stieltjes(phi, times, b_psi_series) + phi.phi(0.0) * b_psi_series[0] +
                 time_trapz(phi_term, h);
    return std::abs(res);
}

double korn_poincare_ratio(const ChannelDomain& dom, const VecField& v, const WallField& r) {
    const int nx = dom.Nx(), ny = dom.Ny();
    require(v.x.nx == nx && v.x.ny == ny, "korn ratio: shape mismatch");
    require(r.nx() == nx, "korn ratio: wall weight shape mismatch");

    // one-sided differences at the domain edges, central inside
    auto ddx = [&](const GridField& f, int i, int j) {
        if (i == 0) return (f.at(1, j) - f.at(0, j)) / dom.dx();
        if (i == nx - 1) return (f.at(nx - 1, j) - f.at(nx - 2, j)) / dom.dx();
        return (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * dom.dx());
    };
    auto ddy = [&](const GridField& f, int i, int j) {
        if (j == 0) return (f.at(i, 1) - f.at(i, 0)) / dom.dy();
        if (j == ny - 1) return (f.at(i, ny - 1) - f.at(i, ny - 2)) / dom.dy();
        return (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * dom.dy());
    };

    KahanSum lhs2, dev2;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double gxx = ddx(v.x, i, j), gxy = ddy(v.x, i, j);
            double gyx = ddx(v.y, i, j), gyy = ddy(v.y, i, j);
            double vv = v.x.at(i, j) * v.x.at(i, j) + v.y.at(i, j) * v.y.at(i, j);
            lhs2.add(vv + gxx * gxx + gxy * gxy + gyx * gyx + gyy * gyy);
            double div = gxx + gyy;
            double dxx = 2.0 * gxx - (2.0 / 3.0) * div;
            double dyy = 2.0 * gyy - (2.0 / 3.0) * div;
            double dxy = gxy + gyx;
            dev2.add(dxx * dxx + 2.0 * dxy * dxy + dyy * dyy);
        }
    }
    KahanSum bterm;
    for (int i = 0; i < nx; ++i) {
        double bx = 1.5 * v.x.at(i, 0) - 0.5 * v.x.at(i, 1);
        double by = 1.5 * v.y.at(i, 0) - 0.5 * v.y.at(i, 1);
        bterm.add(r.bottom[i] * std::sqrt(bx * bx + by * by));
        double tx = 1.5 * v.x.at(i, ny - 1) - 0.5 * v.x.at(i, ny - 2);
        double ty = 1.5 * v.y.at(i, ny - 1) - 0.5 * v.y.at(i, ny - 2);
        bterm.add(r.top[i] * std::sqrt(tx * tx + ty * ty));
    }

    double lhs = std::sqrt(lhs2.value() * dom.cell_weight());
    double rhs = std::sqrt(dev2.value() * dom.cell_weight()) + bterm.value() * dom.wall_weight();
    if (lhs == 0.0) throw std::domain_error("korn_poincare_ratio: undefined for v = 0");
    return lhs / rhs;
}

}  // namespace slipflow
