#include "slipflow/friction.hpp"

#include <fstream>
#include <sstream>

namespace slipflow {

double j_alpha(const Vec2& v, double alpha) {
    require(alpha > 0.0, "j_alpha: alpha must be positive");
    double n = v.norm();
    if (n > alpha) return n;
    return n * n / (2.0 * alpha) + alpha / 2.0;
}

Vec2 grad_j_alpha(const Vec2& v, double alpha) {
    require(alpha > 0.0, "grad_j_alpha: alpha must be positive");
    double n = v.norm();
    if (n > alpha) return v / n;
    return v / alpha;
}

FrictionFunctional friction_functional(const WallTrace& trace, const WallField& g, double alpha,
                                       const GalerkinSpace& space, BoundaryMode mode) {
    const int nx = space.domain().Nx();
    const int m = space.dim();
    require(trace.tangential.nx() == nx && g.nx() == nx, "friction_functional: shape mismatch");

    // b(u) at each wall node (tangential scalar; normal trace is zero)
    std::vector<double> bb(nx), bt(nx);
    for (int i = 0; i < nx; ++i) {
        require(g.bottom[i] >= 0.0 && g.top[i] >= 0.0, "friction modulus must be >= 0");
        if (mode == BoundaryMode::Friction) {
            bb[i] = grad_j_alpha(Vec2(trace.tangential.bottom[i], 0.0), alpha)[0];
            bt[i] = grad_j_alpha(Vec2(trace.tangential.top[i], 0.0), alpha)[0];
        } else {
            bb[i] = trace.tangential.bottom[i];
            bt[i] = trace.tangential.top[i];
        }
    }

    const double ww = space.domain().wall_weight();
    Eigen::VectorXd f(m);
    for (int q = 0; q < m; ++q) {
        const double* wb = &space.wall_tangential_bottom()[static_cast<size_t>(q) * nx];
        const double* wt = &space.wall_tangential_top()[static_cast<size_t>(q) * nx];
        KahanSum s;
        for (int i = 0; i < nx; ++i) s.add(g.bottom[i] * bb[i] * wb[i] + g.top[i] * bt[i] * wt[i]);
        f[q] = -s.value() * ww;
    }
    KahanSum d;
    for (int i = 0; i < nx; ++i) {
        d.add(g.bottom[i] * bb[i] * trace.tangential.bottom[i]);
        d.add(g.top[i] * bt[i] * trace.tangential.top[i]);
    }
    return {DualVector(f), d.value() * ww};
}

FrictionLawResidual friction_law_residual(const VelocityCoeffs& u, const SimParams& p,
                                          const WallField& g, const GalerkinSpace& space) {
    const int nx = space.domain().Nx();
    WallTrace tr = trace_boundary(u, space);

    // tangential traction (Tn)_t = mu (du_x/dy + du_y/dx) on the wall,
    // from the analytic wall-gradient tables
    std::vector<double> tb(nx, 0.0), tt(nx, 0.0);
    for (int q = 0; q < space.dim(); ++q) {
        double cq = u.c[q];
        if (cq == 0.0) continue;
        const double* sb = &space.wall_shear_bottom()[static_cast<size_t>(q) * nx];
        const double* st = &space.wall_shear_top()[static_cast<size_t>(q) * nx];
        for (int i = 0; i < nx; ++i) {
            tb[i] += cq * sb[i];
            tt[i] += cq * st[i];
        }
    }
    double r1 = 0.0, r2 = 0.0;
    for (int i = 0; i < nx; ++i) {
        double trac_b = p.mu * tb[i], trac_t = p.mu * tt[i];
        double ub = tr.tangential.bottom[i], ut = tr.tangential.top[i];
        r1 = std::max(r1, std::max(std::abs(trac_b) - g.bottom[i], 0.0));
        r1 = std::max(r1, std::max(std::abs(trac_t) - g.top[i], 0.0));
        r2 = std::max(r2, std::abs(trac_b * ub + g.bottom[i] * std::abs(ub)));
        r2 = std::max(r2, std::abs(trac_t * ut + g.top[i] * std::abs(ut)));
    }
    return {r1, r2};
}

std::vector<double> load_g_table(const std::string& path, const ChannelDomain& dom) {
    std::ifstream in(path);
    require(in.good(), "cannot open friction table: " + path);
    std::vector<double> ss, vv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double s, v;
        if (row >> s >> v) {
            ss.push_back(s);
            vv.push_back(v);
        }
    }
    require(ss.size() >= 2, "friction table needs at least two rows: " + path);
    for (size_t i = 1; i < ss.size(); ++i)
        require(ss[i] > ss[i - 1], "friction table abscissae must increase: " + path);

    std::vector<double> out(dom.Nx());
    for (int i = 0; i < dom.Nx(); ++i) {
        double x = dom.xc(i);
        if (x <= ss.front()) {
            out[i] = vv.front();
        } else if (x >= ss.back()) {
            out[i] = vv.back();
        } else {
            size_t k = 1;
            while (ss[k] < x) ++k;
            double t = (x - ss[k - 1]) / (ss[k] - ss[k - 1]);
            out[i] = (1.0 - t) * vv[k - 1] + t * vv[k];
        }
        require(out[i] >= 0.0, "friction table values must be >= 0: " + path);
    }
    return out;
}

}  // namespace slipflow
