// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "sfns/assembly.hpp"
#include "sfns/sparse.hpp"

namespace {

using namespace sfns;

struct System {
    FeSpace space;
    DofVector psi;
    CsrMatrix jac;
    Vector x;

    explicit System(int n)
        : space(build_uniform(n, n), LidDriven{1.0}), psi(space.lift()), jac(assemble_a(space, 1.0)) {
        std::mt19937 rng(n);
        std::uniform_real_distribution<double> u(-0.05, 0.05);
        Vector w(space.n_free());
        for (double& v : w) v = u(rng);
        psi = space.expand(w);
        jac = assemble_jacobian(space, 100.0, psi);
        x.resize(space.n_free());
        for (double& v : x) v = u(rng);
    }
};

const System& system_for(int n) {
    static std::map<int, System> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, System(n)).first;
    return it->second;
}

void BM_Spmv(benchmark::State& state) {
    const System& s = system_for(static_cast<int>(state.range(0)));
    Vector y(s.x.size());
    for (auto _ : state) {
        spmv(s.jac, s.x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * s.jac.nnz());
}

void BM_SpmvSerial(benchmark::State& state) {
    const System& s = system_for(static_cast<int>(state.range(0)));
    Vector y(s.x.size());
    for (auto _ : state) {
        spmv_serial(s.jac, s.x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * s.jac.nnz());
}

void BM_Dot(benchmark::State& state) {
    const System& s = system_for(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dot(s.x, s.x));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.x.size()));
}

void BM_DotSerial(benchmark::State& state) {
    const System& s = system_for(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dot_serial(s.x, s.x));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.x.size()));
}

void run_jacobian(benchmark::State& state, Execution exec) {
    const System& s = system_for(static_cast<int>(state.range(0)));
    AssemblyOptions opts;
    opts.execution = exec;
    for (auto _ : state) {
        CsrMatrix m = assemble_jacobian(s.space, 100.0, s.psi, opts);
        benchmark::DoNotOptimize(m.values().data());
    }
    state.SetItemsProcessed(state.iterations() * s.space.mesh().num_elements());
}

void BM_AssembleJacobian(benchmark::State& state) {
    run_jacobian(state, Execution::Parallel);
}

void BM_AssembleJacobianSerial(benchmark::State& state) {
    run_jacobian(state, Execution::Serial);
}

void run_residual(benchmark::State& state, Execution exec) {
    const System& s = system_for(static_cast<int>(state.range(0)));
    AssemblyOptions opts;
    opts.execution = exec;
    const Vector load(s.space.n_free(), 0.0);
    for (auto _ : state) {
        Vector r = nonlinear_residual(s.space, 100.0, s.psi, load, opts);
        benchmark::DoNotOptimize(r.data());
    }
}

void BM_Residual(benchmark::State& state) {
    run_residual(state, Execution::Parallel);
}

void BM_ResidualSerial(benchmark::State& state) {
    run_residual(state, Execution::Serial);
}

}  // namespace

BENCHMARK(BM_Spmv)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_SpmvSerial)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_Dot)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_DotSerial)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_AssembleJacobian)->Arg(32)->Arg(64);
BENCHMARK(BM_AssembleJacobianSerial)->Arg(32)->Arg(64);
BENCHMARK(BM_Residual)->Arg(32)->Arg(64);
BENCHMARK(BM_ResidualSerial)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
