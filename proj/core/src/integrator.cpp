#include "slipflow/integrator.hpp"

#include <cmath>

namespace slipflow {

namespace {

/// Increment of mode k over the outer step [n h, (n+1) h] when the path may
/// be dyadically finer than h; children sum exactly to the coarse increment.
std::vector<double> step_increments(const WienerPath& path, int n, double h) {
    if (path.K == 0) return {};
    double ratio = h / path.dt();
    int r = static_cast<int>(std::llround(ratio));
    require(r >= 1 && std::abs(ratio - r) < 1e-9, "step_increments: path resolution incompatible");
    std::vector<double> out(path.K, 0.0);
    for (int s = 0; s < r; ++s) {
        int fine = n * r + s;
        require(fine < path.nsteps(), "step_increments: step beyond path horizon");
        for (int k = 0; k < path.K; ++k) out[k] += path.dW[static_cast<size_t>(fine) * path.K + k];
    }
    return out;
}

double kinetic_energy(const GridField& rho, const VecField& u, const ChannelDomain& dom) {
    KahanSum s;
    for (size_t t = 0; t < rho.size(); ++t)
        s.add(rho.a[t] * (u.x.a[t] * u.x.a[t] + u.y.a[t] * u.y.a[t]));
    return 0.5 * s.value() * dom.cell_weight();
}

double grad_sq_integral(const GridField& rho, const GridField& gxx, const GridField& gxy,
                        const GridField& gyx, const GridField& gyy, const ChannelDomain& dom) {
    KahanSum s;
    for (size_t t = 0; t < rho.size(); ++t)
        s.add(rho.a[t] * (gxx.a[t] * gxx.a[t] + gxy.a[t] * gxy.a[t] + gyx.a[t] * gyx.a[t] +
                          gyy.a[t] * gyy.a[t]));
    return s.value() * dom.cell_weight();
}

double stress_pairing(const GridField& gxx, const GridField& gxy, const GridField& gyx,
                      const GridField& gyy, const SimParams& p, const ChannelDomain& dom) {
    KahanSum s;
    for (size_t t = 0; t < gxx.size(); ++t) {
        double sxx, sxy, syy;
        stress_entries(gxx.a[t], gxy.a[t], gyx.a[t], gyy.a[t], p, sxx, sxy, syy);
        s.add(sxx * gxx.a[t] + sxy * (gxy.a[t] + gyx.a[t]) + syy * gyy.a[t]);
    }
    return s.value() * dom.cell_weight();
}

/// eps int P_delta''(rho) |grad rho|^2 by face differences, matching the
/// finite-volume gradient the diffusion scheme dissipates.
double pressure_dissipation_rate(const GridField& rho, const SimParams& p,
                                 const ChannelDomain& dom) {
    const int nx = dom.Nx(), ny = dom.Ny();
    KahanSum s;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int il = (i + nx - 1) % nx;
            double dr = (rho.at(i, j) - rho.at(il, j)) / dom.dx();
            double rf = 0.5 * (rho.at(i, j) + rho.at(il, j));
            s.add(pressure_potential_second(rf, p) * dr * dr);
        }
    }
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double dr = (rho.at(i, j) - rho.at(i, j - 1)) / dom.dy();
            double rf = 0.5 * (rho.at(i, j) + rho.at(i, j - 1));
            s.add(pressure_potential_second(rf, p) * dr * dr);
        }
    }
    return p.epsilon * s.value() * dom.cell_weight();
}

Eigen::VectorXd body_force_dual(const GridField& rho, double fx, const GalerkinSpace& space) {
    const int nc = space.ncells();
    Eigen::VectorXd f(space.dim());
    const double w = space.domain().cell_weight();
    for (int j = 0; j < space.dim(); ++j) {
        const double* px = &space.phi_x()[static_cast<size_t>(j) * nc];
        KahanSum s;
        for (int t = 0; t < nc; ++t) s.add(rho.a[t] * px[t]);
        f[j] = fx * s.value() * w;
    }
    return f;
}

}  // namespace

State advance_step(const State& s, const SimSetup& setup, const WienerPath& path, int n,
                   LedgerRow* row_out, double* force_work_out, ItoCorrection* corr_out) {
    const SimParams& p = setup.params;
    const GalerkinSpace& space = setup.space;
    const ChannelDomain& dom = setup.domain;
    const double h = p.h;

    const VelocityCoeffs& u_n = s.velocity;
    CutoffResult cut = cutoff_velocity(u_n, p.R);
    FaceVelocity fv = face_velocity(space, cut.v);

    int n_sub;
    if (setup.coupled_mode) {
        n_sub = 1;
        check_scheme(cfl_substeps(dom, fv, h, setup.cfl_safety) == 1,
                     "coupled mode: h violates the CFL condition");
    } else if (setup.dt_inner > 0.0) {
        n_sub = std::max(1, static_cast<int>(std::ceil(h / setup.dt_inner - 1e-12)));
    } else {
        n_sub = cfl_substeps(dom, fv, h, setup.cfl_safety);
    }
    const double dt = h / n_sub;

    DensitySolver solver(dom, p.epsilon);
    MassOperator mass_n(s.density.rho, space);
    VecField uf_n = space.velocity_field(u_n);

    // Ito correction and sandwich audit at the step's left endpoint
    ItoCorrection corr = ito_correction(s.density.rho, u_n, setup.noise, p, space, mass_n);
    check_scheme(corr.value >= -setup.ito_slack_tol,
                 "Ito correction sandwich violated from below");
    check_scheme(corr.upper - corr.value >= -setup.ito_slack_tol,
                 "Ito correction sandwich violated from above");
    if (corr_out) *corr_out = corr;

    GridField gxx, gxy, gyx, gyy;
    space.velocity_gradient(u_n, gxx, gxy, gyx, gyy);
    const double visc_rate = stress_pairing(gxx, gxy, gyx, gyy, p, dom);

    Eigen::VectorXd dq = Eigen::VectorXd::Zero(space.dim());
    double eps_gu = 0.0, eps_pr = 0.0, bdry = 0.0, work = 0.0;
    DensityState rho_t = s.density;
    double chi_used = cut.chi;

    for (int sub = 0; sub < n_sub; ++sub) {
        const VelocityCoeffs& u_eval = u_n;  // frozen at nh in the iteration scheme
        DriftResult drift = drift_functional(rho_t.rho, u_eval, p, space, setup.g);
        chi_used = drift.chi;
        dq += dt * drift.total.q;
        bdry += dt * drift.boundary_dissipation;
        eps_gu += dt * p.epsilon * grad_sq_integral(rho_t.rho, gxx, gxy, gyx, gyy, dom);
        eps_pr += dt * pressure_dissipation_rate(rho_t.rho, p, dom);
        if (setup.body_force_x != 0.0) {
            Eigen::VectorXd f = body_force_dual(rho_t.rho, setup.body_force_x, space);
            dq += dt * f;
            work += dt * f.dot(u_eval.c);
        }
        rho_t = solver.advance(rho_t, fv, dt);
    }

    // stochastic increment with both coefficients frozen at nh
    DualVector q_new = mass_n.apply(u_n);
    q_new.q += dq;
    double mart = 0.0;
    if (setup.noise.active()) {
        std::vector<double> dW = step_increments(path, n, h);
        std::vector<DualVector> proj =
            noise_projections(s.density.rho, uf_n, setup.noise, p.epsilon, space);
        for (int k = 0; k < setup.noise.K; ++k) {
            q_new.q += proj[k].q * dW[k];
            mart += proj[k].q.dot(u_n.c) * dW[k];
        }
    }

    MassOperator mass_new(rho_t.rho, space);
    VelocityCoeffs u_new = mass_new.solve(q_new);

    State out;
    out.density = rho_t;
    out.velocity = u_new;
    out.time = s.time + h;
    out.step = s.step + 1;
    out.chi = chi_used;
    out.cutoff_active = s.cutoff_active || chi_used < 1.0;

    if (row_out) {
        VecField uf_new = space.velocity_field(u_new);
        row_out->step = out.step;
        row_out->t = out.time;
        row_out->mass = integrate_interior(dom, rho_t.rho);
        row_out->kinetic_energy = kinetic_energy(rho_t.rho, uf_new, dom);
        row_out->potential_energy = integrate_interior(dom, pressure_potential(rho_t.rho, p));
        row_out->visc_dissipation = h * visc_rate;
        row_out->eps_grad_u_dissipation = eps_gu;
        row_out->eps_pressure_dissipation = eps_pr;
        row_out->boundary_dissipation = bdry;
        row_out->ito_correction = h * corr.value;
        row_out->martingale_increment = mart;
        double mn = rho_t.rho.a[0], mx = rho_t.rho.a[0];
        for (double v : rho_t.rho.a) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        row_out->min_rho = mn;
        row_out->max_rho = mx;
        row_out->u_norm_Vm = u_new.norm();
        row_out->chi_value = chi_used;
        row_out->cfl_substeps = n_sub;
    }
    if (force_work_out) *force_work_out = work;
    return out;
}

uint64_t derive_seed(uint64_t seed, uint64_t index) {
    // one splitmix-style scramble keeps ensemble streams disjoint
    uint64_t x = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

TrajectoryRecord run_trajectory(const SimSetup& setup, const InitialData& init, uint64_t seed) {
    return run_trajectory(setup, init, seed, nullptr);
}

TrajectoryRecord run_trajectory(const SimSetup& setup, const InitialData& init, uint64_t seed,
                                const WienerPath* external_path) {
    const SimParams& p = setup.params;
    const ChannelDomain& dom = setup.domain;
    const GalerkinSpace& space = setup.space;
    const int nsteps = setup.nsteps();

    TrajectoryRecord rec;
    rec.seed = seed;
    rec.K = setup.noise.K;
    rec.h = p.h;
    rec.deterministic = !setup.noise.active();
    rec.min_ito_slack_low = std::numeric_limits<double>::infinity();
    rec.min_ito_slack_high = std::numeric_limits<double>::infinity();

    WienerPath path = external_path ? *external_path
                                    : make_wiener_path(seed, setup.noise.K, p.h, nsteps);

    State s;
    s.density = {init.rho0, 0.0};
    s.velocity = init.u0;
    require(init.u0.size() == space.dim(), "run_trajectory: initial velocity size mismatch");
    for (double v : init.rho0.a) check_scheme(v > 0.0, "run_trajectory: initial density not positive");

    auto state_row = [&](const State& st) {
        LedgerRow r;
        VecField uf = space.velocity_field(st.velocity);
        r.step = st.step;
        r.t = st.time;
        r.mass = integrate_interior(dom, st.density.rho);
        r.kinetic_energy = kinetic_energy(st.density.rho, uf, dom);
        r.potential_energy = integrate_interior(dom, pressure_potential(st.density.rho, p));
        double mn = st.density.rho.a[0], mx = st.density.rho.a[0];
        for (double v : st.density.rho.a) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        r.min_rho = mn;
        r.max_rho = mx;
        r.u_norm_Vm = st.velocity.norm();
        r.chi_value = st.chi;
        return r;
    };

    auto push_snapshot = [&](const State& st) {
        if (!setup.record_fields) return;
        rec.snapshots.push_back({st.density.rho, st.velocity.c, st.time});
    };
    auto push_divsup = [&](const State& st) {
        // both the analytic cell sup and the face-difference sup bound the
        // density evolution; the envelope must dominate the discrete one
        CutoffResult cut = cutoff_velocity(st.velocity, p.R);
        double analytic = space.divergence_sup(cut.v);
        double discrete = face_divergence_sup(dom, face_velocity(space, cut.v));
        rec.div_sup.push_back(std::max(analytic, discrete));
    };

    rec.rows.push_back(state_row(s));
    push_snapshot(s);
    push_divsup(s);
    rec.force_work.push_back(0.0);

    const double e0 = rec.rows[0].kinetic_energy + rec.rows[0].potential_energy;
    double diss_sum = 0.0, corr_sum = 0.0, mart_sum = 0.0, work_sum = 0.0;

    for (int n = 0; n < nsteps; ++n) {
        LedgerRow row;
        double work = 0.0;
        ItoCorrection corr;
        try {
            State next = advance_step(s, setup, path, n, &row, &work, &corr);
            s = std::move(next);
        } catch (const SchemeError& e) {
            rec.failure = e.what();
            rec.failure_step = n;
            break;
        }
        diss_sum += row.visc_dissipation + row.eps_grad_u_dissipation +
                    row.eps_pressure_dissipation + row.boundary_dissipation;
        corr_sum += row.ito_correction;
        mart_sum += row.martingale_increment;
        work_sum += work;
        double e_now = row.kinetic_energy + row.potential_energy;
        row.energy_residual = e_now + diss_sum - e0 - corr_sum - mart_sum - work_sum;
        rec.rows.push_back(row);
        rec.force_work.push_back(work);
        push_snapshot(s);
        push_divsup(s);
        rec.min_ito_slack_low = std::min(rec.min_ito_slack_low, corr.value);
        rec.min_ito_slack_high = std::min(rec.min_ito_slack_high, corr.upper - corr.value);
        if (setup.noise.active()) {
            std::vector<double> dW = step_increments(path, n, p.h);
            rec.increments.insert(rec.increments.end(), dW.begin(), dW.end());
        }
    }
    // audit the sandwich at the terminal state as well
    if (!rec.failure && setup.noise.active()) {
        ItoCorrection c = ito_correction(s.density.rho, s.velocity, setup.noise, p, space,
                                         MassOperator(s.density.rho, space));
        rec.min_ito_slack_low = std::min(rec.min_ito_slack_low, c.value);
        rec.min_ito_slack_high = std::min(rec.min_ito_slack_high, c.upper - c.value);
    }
    return rec;
}

std::vector<double> twin_run_divergence(const SimSetup& setup, const InitialData& init,
                                        uint64_t seed, double perturbation) {
    require(perturbation >= 0.0, "twin_run_divergence: perturbation must be >= 0");
    SimSetup se = setup;
    se.record_fields = true;
    InitialData pert = init;
    pert.u0.c[0] += perturbation;
    TrajectoryRecord a = run_trajectory(se, init, seed);
    TrajectoryRecord b = run_trajectory(se, pert, seed);
    size_t n = std::min(a.snapshots.size(), b.snapshots.size());
    std::vector<double> out(n);
    const double w = setup.domain.cell_weight();
    for (size_t i = 0; i < n; ++i) {
        double du = (a.snapshots[i].u - b.snapshots[i].u).norm();
        KahanSum s;
        for (size_t t = 0; t < a.snapshots[i].rho.size(); ++t)
            s.add(std::abs(a.snapshots[i].rho.a[t] - b.snapshots[i].rho.a[t]));
        out[i] = du + s.value() * w;
    }
    return out;
}

}  // namespace slipflow
