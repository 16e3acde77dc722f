#include "slipflow/density.hpp"

#include <cmath>

#include "slipflow/constitutive.hpp"

namespace slipflow {

FaceVelocity face_velocity(const GalerkinSpace& space, const VelocityCoeffs& u_cut) {
    const ChannelDomain& dom = space.domain();
    const int nx = dom.Nx(), ny = dom.Ny();
    require(u_cut.size() == space.dim(), "face_velocity: coefficient length mismatch");
    FaceVelocity fv;
    fv.ux.assign(static_cast<size_t>(nx) * ny, 0.0);
    fv.uy.assign(static_cast<size_t>(nx) * (ny + 1), 0.0);
    for (int q = 0; q < space.dim(); ++q) {
        double cq = u_cut.c[q];
        if (cq == 0.0) continue;
        const double* xf = &space.xface_ux()[static_cast<size_t>(q) * nx * ny];
        for (size_t t = 0; t < fv.ux.size(); ++t) fv.ux[t] += cq * xf[t];
        const double* yf = &space.yface_uy()[static_cast<size_t>(q) * nx * (ny + 1)];
        for (size_t t = 0; t < fv.uy.size(); ++t) fv.uy[t] += cq * yf[t];
    }
    for (double v : fv.ux) fv.max_ux = std::max(fv.max_ux, std::abs(v));
    for (double v : fv.uy) fv.max_uy = std::max(fv.max_uy, std::abs(v));
    return fv;
}

double cfl_limit(const ChannelDomain& dom, const FaceVelocity& fv, double safety) {
    double rate = fv.max_ux / dom.dx() + fv.max_uy / dom.dy();
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return safety / rate;
}

int cfl_substeps(const ChannelDomain& dom, const FaceVelocity& fv, double h, double safety) {
    double lim = cfl_limit(dom, fv, safety);
    if (std::isinf(lim) || h <= lim) return 1;
    return static_cast<int>(std::ceil(h / lim));
}

double face_divergence_sup(const ChannelDomain& dom, const FaceVelocity& fv) {
    const int nx = dom.Nx(), ny = dom.Ny();
    double sup = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int ir = (i + 1) % nx;
            double div = (fv.ux[static_cast<size_t>(j) * nx + ir] -
                          fv.ux[static_cast<size_t>(j) * nx + i]) / dom.dx() +
                         (fv.uy[static_cast<size_t>(j + 1) * nx + i] -
                          fv.uy[static_cast<size_t>(j) * nx + i]) / dom.dy();
            sup = std::max(sup, std::abs(div));
        }
    }
    return sup;
}

DensitySolver::DensitySolver(const ChannelDomain& dom, double epsilon)
    : dom_(dom), eps_(epsilon), fft_(dom.Nx()) {
    require(epsilon >= 0.0, "density solver: epsilon must be >= 0");
    lam_.resize(dom.Nx());
    for (int k = 0; k < dom.Nx(); ++k) {
        double c = std::cos(2.0 * M_PI * k / dom.Nx());
        lam_[k] = (2.0 - 2.0 * c) / (dom.dx() * dom.dx());
    }
}

void DensitySolver::diffuse(GridField& rho, double dt) const {
    if (eps_ == 0.0) return;
    const int nx = dom_.Nx(), ny = dom_.Ny();
    const double r = eps_ * dt / (dom_.dy() * dom_.dy());

    std::vector<std::complex<double>> buf(static_cast<size_t>(nx) * ny);
    std::vector<std::complex<double>> row(nx);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) row[i] = rho.at(i, j);
        fft_.forward(row.data());
        for (int i = 0; i < nx; ++i) buf[static_cast<size_t>(j) * nx + i] = row[i];
    }

    // backward-Euler tridiagonal solve in y per x mode (Neumann walls)
    std::vector<double> diag(ny), cp(ny);
    std::vector<std::complex<double>> d(ny);
    for (int k = 0; k < nx; ++k) {
        double shift = 1.0 + eps_ * dt * lam_[k];
        for (int j = 0; j < ny; ++j) {
            int nbrs = (j == 0 || j == ny - 1) ? 1 : 2;
            diag[j] = shift + r * nbrs;
            d[j] = buf[static_cast<size_t>(j) * nx + k];
        }
        // Thomas forward sweep (off-diagonals all equal to -r)
        cp[0] = -r / diag[0];
        d[0] /= diag[0];
        for (int j = 1; j < ny; ++j) {
            double mlt = diag[j] + r * cp[j - 1];
            cp[j] = -r / mlt;
            d[j] = (d[j] + r * d[j - 1]) / mlt;
        }
        for (int j = ny - 2; j >= 0; --j) d[j] -= cp[j] * d[j + 1];
        for (int j = 0; j < ny; ++j) buf[static_cast<size_t>(j) * nx + k] = d[j];
    }

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) row[i] = buf[static_cast<size_t>(j) * nx + i];
        fft_.inverse(row.data());
        for (int i = 0; i < nx; ++i) rho.at(i, j) = row[i].real();
    }
}

DensityState DensitySolver::advance(const DensityState& state, const FaceVelocity& fv,
                                    double dt) const {
    const int nx = dom_.Nx(), ny = dom_.Ny();
    require(state.rho.nx == nx && state.rho.ny == ny, "density advance: shape mismatch");
    require(dt > 0.0, "density advance: dt must be positive");
    double rate = fv.max_ux / dom_.dx() + fv.max_uy / dom_.dy();
    check_scheme(dt * rate <= 1.0 + 1e-12, "density advance: CFL condition violated");

    const GridField& rho = state.rho;
    GridField out = rho;

    // upwind fluxes through x faces (face i is the left face of cell i)
    std::vector<double> flux(static_cast<size_t>(nx));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double u = fv.ux[static_cast<size_t>(j) * nx + i];
            int il = (i + nx - 1) % nx;
            flux[i] = u >= 0.0 ? u * rho.at(il, j) : u * rho.at(i, j);
        }
        for (int i = 0; i < nx; ++i) {
            int ir = (i + 1) % nx;
            out.at(i, j) -= dt / dom_.dx() * (flux[ir] - flux[i]);
        }
    }
    // upwind fluxes through interior y faces; wall fluxes vanish with u.n
    std::vector<double> fl(static_cast<size_t>(nx) * (ny + 1), 0.0);
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double v = fv.uy[static_cast<size_t>(j) * nx + i];
            fl[static_cast<size_t>(j) * nx + i] =
                v >= 0.0 ? v * rho.at(i, j - 1) : v * rho.at(i, j);
        }
    }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out.at(i, j) -= dt / dom_.dy() *
                            (fl[static_cast<size_t>(j + 1) * nx + i] - fl[static_cast<size_t>(j) * nx + i]);

    diffuse(out, dt);

    for (double v : out.a)
        check_scheme(v > 0.0 && std::isfinite(v),
                     "density advance: positivity lost (scheme failure, not clipped)");

    return {std::move(out), state.time + dt};
}

DensityState advance_density(const DensityState& state, const VelocityCoeffs& u_frozen,
                             const GalerkinSpace& space, double epsilon, double R, double dt_inner,
                             double h, double cfl_safety) {
    require(dt_inner <= h * (1.0 + 1e-12), "advance_density: dt_inner must not exceed h");
    CutoffResult cut = cutoff_velocity(u_frozen, R);
    FaceVelocity fv = face_velocity(space, cut.v);
    double lim = cfl_limit(space.domain(), fv, cfl_safety);
    check_scheme(dt_inner <= lim, "advance_density: dt_inner violates the CFL condition");
    DensitySolver solver(space.domain(), epsilon);
    return solver.advance(state, fv, dt_inner);
}

EnvelopeReport density_envelope(const std::vector<double>& min_rho,
                                const std::vector<double>& max_rho,
                                const std::vector<double>& div_sup, double h) {
    require(min_rho.size() == max_rho.size() && min_rho.size() == div_sup.size() &&
                !min_rho.empty(),
            "density_envelope: inconsistent trajectory data");
    EnvelopeReport rep;
    const size_t n = min_rho.size();
    rep.lower.resize(n);
    rep.upper.resize(n);
    double integral = 0.0;
    rep.lower_margin = std::numeric_limits<double>::infinity();
    rep.upper_margin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        if (i > 0) integral += h * div_sup[i - 1];
        rep.lower[i] = min_rho[0] * std::exp(-integral);
        rep.upper[i] = max_rho[0] * std::exp(integral);
        rep.lower_margin = std::min(rep.lower_margin, min_rho[i] - rep.lower[i]);
        rep.upper_margin = std::min(rep.upper_margin, rep.upper[i] - max_rho[i]);
    }
    return rep;
}

}  // namespace slipflow
