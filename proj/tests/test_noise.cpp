#include <doctest.h>

#include "slipflow/noise.hpp"

using namespace slipflow;

TEST_CASE("increment streams are deterministic") {
    WienerPath p1 = make_wiener_path(2024, 4, 0.01, 50);
    WienerPath p2 = make_wiener_path(2024, 4, 0.01, 50);
    for (int n = 0; n < 50; ++n) {
        auto a = sample_increments(p1, n);
        auto b = sample_increments(p2, n);
        for (int k = 0; k < 4; ++k) CHECK(a[k] == b[k]);
    }
    WienerPath p3 = make_wiener_path(2025, 4, 0.01, 50);
    CHECK(sample_increments(p3, 0)[0] != sample_increments(p1, 0)[0]);
    CHECK_THROWS_AS(sample_increments(p1, 50), ConfigError);
}

TEST_CASE("increment moments match the Gaussian law") {
    const int N = 100000;
    const double dt = 0.02;
    WienerPath p = make_wiener_path(7, 1, dt, N);
    double sum = 0.0, sq = 0.0;
    for (int n = 0; n < N; ++n) {
        double v = p.dW[n];
        sum += v;
        sq += v * v;
    }
    double mean = sum / N;
    double var = sq / N - mean * mean;
    double stderr_mean = std::sqrt(dt / N);
    CHECK(std::abs(mean) <= 4.0 * stderr_mean);
    CHECK(std::abs(var - dt) <= 0.05 * dt);
}

TEST_CASE("dyadic refinement reconstructs parents and commutes") {
    WienerPath base = make_wiener_path(99, 3, 0.04, 16);
    WienerPath fine = refine_brownian_path(base, 1);
    CHECK(fine.nsteps() == 32);
    CHECK(fine.dt() == doctest::Approx(0.02).epsilon(1e-15));
    for (int n = 0; n < 16; ++n)
        for (int k = 0; k < 3; ++k) {
            double parent = base.dW[static_cast<size_t>(n) * 3 + k];
            double sum = fine.dW[static_cast<size_t>(2 * n) * 3 + k] +
                         fine.dW[static_cast<size_t>(2 * n + 1) * 3 + k];
            CHECK(sum == doctest::Approx(parent).epsilon(1e-14).scale(1.0));
        }

    WienerPath two_at_once = refine_brownian_path(base, 2);
    WienerPath one_then_one = refine_brownian_path(refine_brownian_path(base, 1), 1);
    REQUIRE(two_at_once.dW.size() == one_then_one.dW.size());
    for (size_t i = 0; i < two_at_once.dW.size(); ++i)
        CHECK(two_at_once.dW[i] == one_then_one.dW[i]);
}

TEST_CASE("bridge split has the right conditional variance") {
    const int N = 20000;
    const double dt = 0.1;
    WienerPath base = make_wiener_path(31, 1, dt, N);
    WienerPath fine = refine_brownian_path(base, 1);
    double sq = 0.0;
    for (int n = 0; n < N; ++n) {
        double child = fine.dW[static_cast<size_t>(2 * n)];
        double dev = child - 0.5 * base.dW[n];
        sq += dev * dev;
    }
    double var = sq / N;
    CHECK(std::abs(var - dt / 4.0) <= 0.05 * (dt / 4.0));
}

TEST_CASE("regularized coefficient equals the raw one in the admissible region") {
    ChannelDomain dom = build_channel_domain(2.0, 16, 8);
    NoiseModel model = build_noise_model(dom, 4, NoiseFamily::LinearMomentum, 0.8);
    double eps = 0.1;

    GridField rho = dom.make_scalar(1.0);  // >= eps everywhere
    VecField u(dom.Nx(), dom.Ny());        // |u| = 0 <= 1/eps - 1
    for (int k = 0; k < 4; ++k) {
        VecField G = evaluate_coefficient(rho, u, k, model, eps);
        for (size_t t = 0; t < rho.size(); ++t) {
            Vec2 d = model.dir[k] == 0 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
            Vec2 raw = model.gk[k] * model.sigma[k].a[t] * (model.c1 * d);
            CHECK(G.x.a[t] == doctest::Approx(raw[0]).epsilon(1e-15).scale(1.0));
            CHECK(G.y.a[t] == doctest::Approx(raw[1]).epsilon(1e-15).scale(1.0));
        }
    }

    // rho = eps/4 kills the first cutoff entirely
    GridField tiny = dom.make_scalar(eps / 4.0);
    VecField G = evaluate_coefficient(tiny, u, 0, model, eps);
    for (size_t t = 0; t < tiny.size(); ++t) {
        CHECK(G.x.a[t] == 0.0);
        CHECK(G.y.a[t] == 0.0);
    }
}

TEST_CASE("coefficient bounds: growth and regularized sup") {
    ChannelDomain dom = build_channel_domain(2.0, 16, 8);
    NoiseModel model = build_noise_model(dom, 6, NoiseFamily::LinearMomentum, 1.3);
    double eps = 0.05;
    uint64_t s = 5;

    for (int trial = 0; trial < 10; ++trial) {
        GridField rho = dom.make_scalar();
        VecField u(dom.Nx(), dom.Ny());
        for (size_t t = 0; t < rho.size(); ++t) {
            rho.a[t] = std::abs(counter_gaussian(s, 0, 50 + trial, t)) + 1e-6;
            u.x.a[t] = 30.0 * counter_gaussian(s, 1, 50 + trial, t);
            u.y.a[t] = 30.0 * counter_gaussian(s, 2, 50 + trial, t);
        }
        for (int k = 0; k < model.K; ++k) {
            VecField G = evaluate_coefficient(rho, u, k, model, eps);
            double fke = model.f_bound(k, eps);
            for (size_t t = 0; t < rho.size(); ++t) {
                double r = rho.a[t];
                double Gn = std::hypot(G.x.a[t], G.y.a[t]);
                // |G_k| <= g_k (rho + |q|) for the raw family, and the
                // regularized field is pointwise below it
                double q = r * std::hypot(u.x.a[t], u.y.a[t]);
                CHECK(Gn <= model.gk[k] * (r + q) + 1e-12);
                // |F_{k,eps}| <= f_{k,eps}
                if (r > 0.0) CHECK(Gn / r <= fke + 1e-12);
            }
        }
    }
}

TEST_CASE("Ito correction sandwich and constant-density oracle") {
    ChannelDomain dom = build_channel_domain(2.0, 16, 8);
    GalerkinSpace space = build_velocity_space(dom, 10);
    SimParams p;
    p.epsilon = 0.1;

    NoiseModel off = build_noise_model(dom, 0, NoiseFamily::Off, 0.0);
    GridField rho = dom.make_scalar(2.0);
    MassOperator mass(rho, space);
    ItoCorrection c0 = ito_correction(rho, VelocityCoeffs::zero(10), off, p, space, mass);
    CHECK(c0.value == 0.0);
    CHECK(c0.upper == 0.0);

    NoiseModel model = build_noise_model(dom, 5, NoiseFamily::LinearMomentum, 0.9);
    VelocityCoeffs u = VelocityCoeffs::zero(10);
    u.c[1] = 0.3;
    u.c[4] = -0.2;

    // constant density: M = rho I on coefficients, so the correction is
    // (1/2) sum_k |q_k|^2 / rho
    ItoCorrection c = ito_correction(rho, u, model, p, space, mass);
    VecField uf = space.velocity_field(u);
    double expect = 0.0;
    for (int k = 0; k < model.K; ++k) {
        VecField G = evaluate_coefficient(rho, uf, k, model, p.epsilon);
        VelocityCoeffs q = project_velocity(G, space);
        expect += 0.5 * q.c.squaredNorm() / 2.0;
    }
    CHECK(c.value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(c.value >= 0.0);
    CHECK(c.upper >= c.value - 1e-12);

    // random states keep the sandwich
    uint64_t s = 17;
    for (int trial = 0; trial < 15; ++trial) {
        GridField r = dom.make_scalar();
        for (size_t t = 0; t < r.size(); ++t)
            r.a[t] = 0.5 + std::abs(counter_gaussian(s, 3, 60 + trial, t));
        VelocityCoeffs v = VelocityCoeffs::zero(10);
        for (int i = 0; i < 10; ++i) v.c[i] = 0.5 * counter_gaussian(s, 4, 60 + trial, i);
        MassOperator mr(r, space);
        ItoCorrection cc = ito_correction(r, v, model, p, space, mr);
        CHECK(cc.value >= -1e-12);
        CHECK(cc.upper - cc.value >= -1e-12);
    }
}

TEST_CASE("Ito correction is monotone in the truncation level") {
    ChannelDomain dom = build_channel_domain(2.0, 16, 8);
    GalerkinSpace space = build_velocity_space(dom, 10);
    SimParams p;
    p.epsilon = 0.1;
    GridField rho = dom.make_scalar(1.3);
    MassOperator mass(rho, space);
    VelocityCoeffs u = VelocityCoeffs::zero(10);
    u.c[0] = 0.4;

    double prev = 0.0;
    for (int K = 1; K <= 6; ++K) {
        NoiseModel model = build_noise_model(dom, K, NoiseFamily::LinearMomentum, 0.7);
        ItoCorrection c = ito_correction(rho, u, model, p, space, mass);
        CHECK(c.value >= prev - 1e-15);
        prev = c.value;
    }
}

TEST_CASE("density-only family carries no momentum dependence") {
    ChannelDomain dom = build_channel_domain(2.0, 8, 4);
    NoiseModel model = build_noise_model(dom, 2, NoiseFamily::DensityOnly, 1.0, 0.4, 0.3);
    CHECK(model.c2 == 0.0);
    GridField rho = dom.make_scalar(1.0);
    VecField u1(dom.Nx(), dom.Ny()), u2(dom.Nx(), dom.Ny());
    for (size_t t = 0; t < u2.x.size(); ++t) u2.x.a[t] = 3.0;
    VecField a = evaluate_coefficient(rho, u1, 0, model, 0.2);
    VecField b = evaluate_coefficient(rho, u2, 0, model, 0.2);
    for (size_t t = 0; t < a.x.size(); ++t) {
        CHECK(a.x.a[t] == b.x.a[t]);
        CHECK(a.y.a[t] == b.y.a[t]);
    }
}
