#include <doctest.h>

#include "slipflow/basis.hpp"

using namespace slipflow;

TEST_CASE("channel domain quadrature weights") {
    ChannelDomain d2 = build_channel_domain(2.0, 8, 8);
    GridField one = d2.make_scalar(1.0);
    CHECK(integrate_interior(d2, one) == doctest::Approx(2.0).epsilon(1e-14));

    ChannelDomain d1 = build_channel_domain(1.0, 4, 4);
    WallField wone = d1.make_wall(1.0);
    CHECK(integrate_boundary(d1, wone) == doctest::Approx(2.0).epsilon(1e-14));

    ChannelDomain d3 = build_channel_domain(2.0 * M_PI, 64, 32);
    CHECK(d3.cell_weight() == doctest::Approx(2.0 * M_PI / 64.0 / 32.0).epsilon(1e-15));

    CHECK_THROWS_AS(build_channel_domain(-1.0, 8, 8), ConfigError);
    CHECK_THROWS_AS(build_channel_domain(1.0, 2, 8), ConfigError);
}

TEST_CASE("interior quadrature integrates sin^2 exactly") {
    ChannelDomain dom = build_channel_domain(2.0, 16, 8);
    GridField f = dom.make_scalar();
    for (int j = 0; j < dom.Ny(); ++j)
        for (int i = 0; i < dom.Nx(); ++i) {
            double s = sin_pi(2.0 * dom.xc(i) / dom.Lx());
            f.at(i, j) = s * s;
        }
    CHECK(integrate_interior(dom, f) == doctest::Approx(dom.Lx() / 2.0).epsilon(1e-12));
}

TEST_CASE("boundary quadrature with weight") {
    ChannelDomain dom = build_channel_domain(2.0, 8, 4);
    WallField f = dom.make_wall(3.0);
    WallField g = dom.make_wall(1.0);
    CHECK(integrate_boundary(dom, f, g) == doctest::Approx(2.0 * 2.0 * 3.0).epsilon(1e-14));
}

TEST_CASE("velocity space orthonormality and trace") {
    ChannelDomain dom = build_channel_domain(2.0 * M_PI, 32, 16);
    GalerkinSpace space = build_velocity_space(dom, 24);
    const int m = space.dim();
    const double w = dom.cell_weight();

    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            const double* pxi = &space.phi_x()[static_cast<size_t>(i) * space.ncells()];
            const double* pyi = &space.phi_y()[static_cast<size_t>(i) * space.ncells()];
            const double* pxj = &space.phi_x()[static_cast<size_t>(j) * space.ncells()];
            const double* pyj = &space.phi_y()[static_cast<size_t>(j) * space.ncells()];
            for (int t = 0; t < space.ncells(); ++t) s += pxi[t] * pxj[t] + pyi[t] * pyj[t];
            s *= w;
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    }
    CHECK(worst <= 1e-10);

    // normal trace vanishes exactly for every member
    for (int q = 0; q < m; ++q) {
        VelocityCoeffs e = VelocityCoeffs::zero(m);
        e.c[q] = 1.0;
        WallTrace tr = trace_boundary(e, space);
        for (int i = 0; i < dom.Nx(); ++i) {
            CHECK(tr.normal.bottom[i] == 0.0);
            CHECK(tr.normal.top[i] == 0.0);
        }
    }
}

TEST_CASE("first mode is the constant tangential mode") {
    ChannelDomain dom = build_channel_domain(2.0, 16, 8);
    GalerkinSpace space = build_velocity_space(dom, 1);
    const BasisMode& md = space.modes()[0];
    CHECK(md.comp == 0);
    CHECK(md.k == 0);
    CHECK(md.j == 0);
    VelocityCoeffs e = VelocityCoeffs::zero(1);
    e.c[0] = 1.0;
    VecField f = space.velocity_field(e);
    for (size_t t = 0; t < f.y.size(); ++t) CHECK(f.y.a[t] == 0.0);
    // normalized constant: 1/sqrt(Lx * 1)
    CHECK(f.x.a[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("interior family vanishes on the walls") {
    ChannelDomain dom = build_channel_domain(2.0, 16, 8);
    GalerkinSpace space = build_velocity_space(dom, 8, true);
    for (int q = 0; q < space.dim(); ++q) {
        VelocityCoeffs e = VelocityCoeffs::zero(space.dim());
        e.c[q] = 1.0;
        WallTrace tr = trace_boundary(e, space);
        for (int i = 0; i < dom.Nx(); ++i) {
            CHECK(std::abs(tr.tangential.bottom[i]) <= 1e-14);
            CHECK(std::abs(tr.tangential.top[i]) <= 1e-14);
        }
    }
}

TEST_CASE("nesting: smaller space is a prefix of the larger") {
    ChannelDomain dom = build_channel_domain(2.0, 16, 8);
    GalerkinSpace s12 = build_velocity_space(dom, 12);
    GalerkinSpace s20 = build_velocity_space(dom, 20);
    for (int q = 0; q < 12; ++q) {
        CHECK(s12.modes()[q].comp == s20.modes()[q].comp);
        CHECK(s12.modes()[q].k == s20.modes()[q].k);
        CHECK(s12.modes()[q].parity == s20.modes()[q].parity);
        CHECK(s12.modes()[q].j == s20.modes()[q].j);
    }
}

TEST_CASE("dimension cap is enforced") {
    ChannelDomain dom = build_channel_domain(1.0, 4, 4);
    int cap = GalerkinSpace::max_dim(dom, false);
    CHECK_THROWS_AS(build_velocity_space(dom, cap + 1), ConfigError);
    CHECK_NOTHROW(build_velocity_space(dom, cap));
}

TEST_CASE("projection recovers coefficients") {
    ChannelDomain dom = build_channel_domain(2.0 * M_PI, 32, 16);
    GalerkinSpace space = build_velocity_space(dom, 10);

    VelocityCoeffs e3 = VelocityCoeffs::zero(10);
    e3.c[3] = 1.0;
    VecField f = space.velocity_field(e3);
    VelocityCoeffs back = project_velocity(f, space);
    for (int q = 0; q < 10; ++q)
        CHECK(std::abs(back.c[q] - (q == 3 ? 1.0 : 0.0)) <= 1e-10);

    VecField zero(dom.Nx(), dom.Ny());
    VelocityCoeffs z = project_velocity(zero, space);
    CHECK(z.norm() == 0.0);
}

TEST_CASE("Bessel inequality for a rough field") {
    ChannelDomain dom = build_channel_domain(2.0, 32, 16);
    GalerkinSpace space = build_velocity_space(dom, 16);
    VecField f(dom.Nx(), dom.Ny());
    uint64_t state = 42;
    auto rnd = [&]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
    };
    for (size_t t = 0; t < f.x.size(); ++t) {
        f.x.a[t] = rnd();
        f.y.a[t] = rnd();
    }
    VelocityCoeffs c = project_velocity(f, space);
    GridField sq(dom.Nx(), dom.Ny());
    for (size_t t = 0; t < f.x.size(); ++t) sq.a[t] = f.x.a[t] * f.x.a[t] + f.y.a[t] * f.y.a[t];
    CHECK(c.c.squaredNorm() <= integrate_interior(dom, sq) + 1e-8);
}

TEST_CASE("trace tables match direct evaluation") {
    ChannelDomain dom = build_channel_domain(2.0, 16, 8);
    GalerkinSpace space = build_velocity_space(dom, 6);
    VelocityCoeffs e = VelocityCoeffs::zero(6);
    e.c[0] = 1.0;
    WallTrace tr = trace_boundary(e, space);
    for (int i = 0; i < dom.Nx(); ++i) {
        CHECK(tr.tangential.bottom[i] ==
              doctest::Approx(space.wall_tangential_bottom()[i]).epsilon(1e-15));
    }
    VelocityCoeffs z = VelocityCoeffs::zero(6);
    WallTrace tz = trace_boundary(z, space);
    for (int i = 0; i < dom.Nx(); ++i) CHECK(tz.tangential.bottom[i] == 0.0);
}

TEST_CASE("default family has zero wall-normal shear") {
    ChannelDomain dom = build_channel_domain(2.0, 16, 8);
    GalerkinSpace space = build_velocity_space(dom, 20);
    double worst = 0.0;
    for (size_t t = 0; t < space.wall_shear_bottom().size(); ++t) {
        worst = std::max(worst, std::abs(space.wall_shear_bottom()[t]));
        worst = std::max(worst, std::abs(space.wall_shear_top()[t]));
    }
    CHECK(worst <= 1e-12);
}
