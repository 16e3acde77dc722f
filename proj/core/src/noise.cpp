#include "slipflow/noise.hpp"

#include <cmath>

namespace slipflow {

namespace {

uint64_t splitmix(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

uint64_t key_of(uint64_t seed, uint64_t k, uint64_t level, uint64_t n) {
    uint64_t h = splitmix(seed ^ 0xA0761D6478BD642Full);
    h = splitmix(h ^ k);
    h = splitmix(h ^ (level + 0x1000));
    h = splitmix(h ^ n);
    return h;
}

double to_unit(uint64_t h) {
    // (0,1), never exactly 0 or 1
    return (static_cast<double>(h >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

}  // namespace

double counter_gaussian(uint64_t seed, uint64_t k, uint64_t level, uint64_t n) {
    uint64_t h = key_of(seed, k, level, n);
    double u1 = to_unit(h);
    double u2 = to_unit(splitmix(h ^ 0x2545F4914F6CDD1Dull));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

NoiseModel build_noise_model(const ChannelDomain& dom, int K, NoiseFamily family, double g0,
                             double c1, double c2) {
    require(K >= 0, "noise model: K must be >= 0");
    require(c1 >= 0.0 && c2 >= 0.0 && c1 + c2 <= 1.0,
            "noise model: need c1, c2 >= 0 with c1 + c2 <= 1 for the growth bounds");
    NoiseModel m;
    m.K = K;
    m.family = family;
    m.g0 = g0;
    if (family == NoiseFamily::DensityOnly) {
        m.c1 = c1 + c2;  // all weight on the density part
        m.c2 = 0.0;
    } else {
        m.c1 = c1;
        m.c2 = c2;
    }
    m.gk.resize(K);
    m.sigma.reserve(K);
    m.dir.resize(K);
    // low-frequency profile catalogue, cycling through (a,b) by total order
    static const int prof[][2] = {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}, {2, 2}};
    for (int k = 0; k < K; ++k) {
        m.gk[k] = g0 / ((k + 1.0) * (k + 1.0));
        int a = prof[k % 8][0], b = prof[k % 8][1];
        GridField s(dom.Nx(), dom.Ny());
        for (int j = 0; j < dom.Ny(); ++j)
            for (int i = 0; i < dom.Nx(); ++i)
                s.at(i, j) = cos_pi(2.0 * a * dom.xc(i) / dom.Lx()) * cos_pi(b * dom.yc(j));
        m.sigma.push_back(std::move(s));
        m.dir[k] = k % 2;
    }
    return m;
}

Vec2 coefficient_F(const NoiseModel& model, int k, double eps, double sigma_val, int dir,
                   double rho, const Vec2& u) {
    if (model.family == NoiseFamily::Off) return Vec2::Zero();
    Vec2 d = dir == 0 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
    Vec2 Fk = model.gk[k] * sigma_val * (model.c1 * d + model.c2 * u);
    if (rho <= 0.0) return Vec2::Zero();
    double cut_rho = chi_cutoff(eps / rho - 1.0);
    double cut_u = chi_cutoff(u.norm() - 1.0 / eps);
    return cut_rho * cut_u * Fk;
}

VecField evaluate_coefficient(const GridField& rho, const VecField& u, int k,
                              const NoiseModel& model, double eps) {
    require(k >= 0 && k < model.K, "evaluate_coefficient: mode index out of range");
    require(rho.same_shape(u.x), "evaluate_coefficient: shape mismatch");
    VecField out(rho.nx, rho.ny);
    const GridField& sg = model.sigma[k];
    for (size_t t = 0; t < rho.size(); ++t) {
        double r = rho.a[t];
        if (r < 0.0) throw std::domain_error("evaluate_coefficient: negative density");
        Vec2 F = coefficient_F(model, k, eps, sg.a[t], model.dir[k], r, Vec2(u.x.a[t], u.y.a[t]));
        out.x.a[t] = r * F[0];
        out.y.a[t] = r * F[1];
    }
    return out;
}

WienerPath make_wiener_path(uint64_t seed, int K, double h0, int n0) {
    require(K >= 0 && n0 >= 0 && h0 > 0.0, "wiener path: invalid shape");
    WienerPath p;
    p.seed = seed;
    p.K = K;
    p.h0 = h0;
    p.n0 = n0;
    p.level = 0;
    p.dW.resize(static_cast<size_t>(n0) * K);
    double s = std::sqrt(h0);
    for (int n = 0; n < n0; ++n)
        for (int k = 0; k < K; ++k)
            p.dW[static_cast<size_t>(n) * K + k] = s * counter_gaussian(seed, k, 0, n);
    return p;
}

WienerPath refine_brownian_path(const WienerPath& path, int levels) {
    require(levels >= 1, "refine_brownian_path: levels must be >= 1");
    WienerPath p = path;
    for (int l = 0; l < levels; ++l) {
        int fine_level = p.level + 1;
        int nfine = p.nsteps() * 2;
        double tau = p.dt();  // parent interval length
        std::vector<double> fine(static_cast<size_t>(nfine) * p.K);
        for (int n = 0; n < p.nsteps(); ++n) {
            for (int k = 0; k < p.K; ++k) {
                double parent = p.dW[static_cast<size_t>(n) * p.K + k];
                double z = counter_gaussian(p.seed, k, fine_level, n);
                double child1 = 0.5 * parent + 0.5 * std::sqrt(tau) * z;
                fine[static_cast<size_t>(2 * n) * p.K + k] = child1;
                fine[static_cast<size_t>(2 * n + 1) * p.K + k] = parent - child1;
            }
        }
        p.dW = std::move(fine);
        p.level = fine_level;
    }
    return p;
}

std::vector<double> sample_increments(const WienerPath& path, int n) {
    require(n >= 0 && n < path.nsteps(), "sample_increments: step index out of range");
    return std::vector<double>(path.dW.begin() + static_cast<size_t>(n) * path.K,
                               path.dW.begin() + static_cast<size_t>(n + 1) * path.K);
}

std::vector<DualVector> noise_projections(const GridField& rho, const VecField& u_field,
                                          const NoiseModel& model, double eps,
                                          const GalerkinSpace& space) {
    std::vector<DualVector> out;
    out.reserve(model.K);
    for (int k = 0; k < model.K; ++k) {
        VecField G = evaluate_coefficient(rho, u_field, k, model, eps);
        out.push_back(DualVector(project_velocity(G, space).c));
    }
    return out;
}

ItoCorrection ito_correction(const GridField& rho, const VelocityCoeffs& u,
                             const NoiseModel& model, const SimParams& p,
                             const GalerkinSpace& space, const MassOperator& mass) {
    ItoCorrection c;
    if (!model.active()) return c;
    check_scheme(mass.rho_min() > 0.0, "ito_correction: singular mass operator");
    VecField uf = space.velocity_field(u);
    const double w = space.domain().cell_weight();
    for (int k = 0; k < model.K; ++k) {
        VecField G = evaluate_coefficient(rho, uf, k, model, p.epsilon);
        DualVector q(project_velocity(G, space).c);
        VelocityCoeffs wk = mass.solve(q);
        // int G . (sum_j wk_j phi_j) dx = q . wk by the projection identity
        c.value += 0.5 * q.q.dot(wk.c);
        KahanSum s;
        for (size_t t = 0; t < rho.size(); ++t) {
            double r = rho.a[t];
            double g2 = G.x.a[t] * G.x.a[t] + G.y.a[t] * G.y.a[t];
            s.add(r > 0.0 ? g2 / r : 0.0);
        }
        c.upper += 0.5 * s.value() * w;
    }
    return c;
}

}  // namespace slipflow
