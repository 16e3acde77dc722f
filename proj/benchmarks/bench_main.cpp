#include <benchmark/benchmark.h>

#include "slipflow/density.hpp"
#include "slipflow/noise.hpp"
#include "slipflow/pde_ops.hpp"

using namespace slipflow;

namespace {

struct Fixture {
    ChannelDomain dom;
    GalerkinSpace space;
    SimParams params;
    GridField rho;
    VelocityCoeffs u;
    WallField g;

    explicit Fixture(int nx, int ny, int m)
        : dom(2.0 * M_PI, nx, ny), space(dom, m, false), rho(dom.make_scalar(1.0)),
          u(VelocityCoeffs::zero(m)), g(dom.make_wall(1.0)) {
        params.a = 0.5;
        params.mu = 0.1;
        params.delta = 0.1;
        params.epsilon = 0.02;
        params.alpha = 0.05;
        for (int i = 0; i < m; ++i) u.c[i] = 0.1 * std::sin(1.0 + i);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                rho.at(i, j) = 1.0 + 0.2 * cos_pi(2.0 * dom.xc(i) / dom.Lx());
    }
};

}  // namespace

static void BM_DriftAssembly(benchmark::State& state) {
    Fixture f(64, 32, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        DriftResult d = drift_functional(f.rho, f.u, f.params, f.space, f.g);
        benchmark::DoNotOptimize(d.total.q.data());
    }
}
BENCHMARK(BM_DriftAssembly)->Arg(12)->Arg(24)->Arg(48);

static void BM_MassOperatorSolve(benchmark::State& state) {
    Fixture f(64, 32, static_cast<int>(state.range(0)));
    DualVector q = mass_operator_apply(f.rho, f.u, f.space);
    for (auto _ : state) {
        MassOperator op(f.rho, f.space);
        VelocityCoeffs x = op.solve(q);
        benchmark::DoNotOptimize(x.c.data());
    }
}
BENCHMARK(BM_MassOperatorSolve)->Arg(12)->Arg(24)->Arg(48);

static void BM_DensityStep(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    Fixture f(2 * n, n, 24);
    CutoffResult cut = cutoff_velocity(f.u, 1e9);
    FaceVelocity fv = face_velocity(f.space, cut.v);
    DensitySolver solver(f.dom, f.params.epsilon);
    double dt = 0.5 * cfl_limit(f.dom, fv, 0.9);
    DensityState s{f.rho, 0.0};
    for (auto _ : state) {
        DensityState out = solver.advance(s, fv, dt);
        benchmark::DoNotOptimize(out.rho.a.data());
    }
}
BENCHMARK(BM_DensityStep)->Arg(32)->Arg(64)->Arg(128);

static void BM_RieszTransform(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    GridField f(2 * n, 2 * n);
    for (size_t t = 0; t < f.size(); ++t) f.a[t] = std::sin(0.1 * t);
    for (auto _ : state) {
        GridField r = synthesize(riesz_transform(analyze(f, 2.0 * M_PI, 2.0), 0, 1));
        benchmark::DoNotOptimize(r.a.data());
    }
}
BENCHMARK(BM_RieszTransform)->Arg(32)->Arg(64)->Arg(128);

static void BM_BogovskiiSolve(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ChannelDomain dom(2.0 * M_PI, 2 * n, n);
    BogovskiiSolver solver(dom);
    GridField f = dom.make_scalar();
    for (size_t t = 0; t < f.size(); ++t) f.a[t] = std::sin(0.37 * t);
    for (auto _ : state) {
        BogovskiiResult r = solver.solve(f);
        benchmark::DoNotOptimize(r.u.x.a.data());
    }
}
BENCHMARK(BM_BogovskiiSolve)->Arg(16)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
