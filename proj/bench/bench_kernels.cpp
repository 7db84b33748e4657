// Throughput of the OpenMP field-update kernels against the plain serial
// reference, plus the detuning-sweep kernel in both execution modes.
//
// Build target: loopres_bench (not part of ctest). Run with
//   ./bench/loopres_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "loopres/cmt.hpp"
#include "loopres/exec.hpp"
#include "loopres/fdtd.hpp"
#include "loopres/spectra.hpp"

using namespace loopres;
using namespace loopres::fdtd;

namespace {

FdtdScene medium_scene() {
    GeometrySpec g;
    g.waveguide = Waveguide{0.0, 150.0, 4.0};
    g.rings.push_back(Ring{0.0, 3695.0, 3500.0, 3350.0, 4.0});
    Domain dom{-6000.0, -1800.0, 6000.0, 9000.0};
    FdtdScene scene;
    scene.eps = rasterize(g, dom, 30.0);
    scene.source.i = 20;
    scene.source.j = scene.eps.ny / 2;
    scene.source.wavelength = 571.8;
    scene.probe.i = scene.eps.nx - 20;
    scene.probe.j0 = scene.eps.ny / 2 - 8;
    scene.probe.j1 = scene.eps.ny / 2 + 8;
    return scene;
}

void fdtd_step_reference(benchmark::State& state) {
    FdtdSolver solver(medium_scene());
    for (auto _ : state) {
        solver.step_reference();
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * solver.nx() * solver.ny());
}

void fdtd_step_omp(benchmark::State& state) {
    set_exec_mode(ExecMode::parallel);
    FdtdSolver solver(medium_scene());
    for (auto _ : state) {
        solver.step();
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * solver.nx() * solver.ny());
}

void fdtd_step_serial_mode(benchmark::State& state) {
    set_exec_mode(ExecMode::serial);
    FdtdSolver solver(medium_scene());
    for (auto _ : state) {
        solver.step();
        benchmark::ClobberMemory();
    }
    set_exec_mode(ExecMode::parallel);
    state.SetItemsProcessed(state.iterations() * solver.nx() * solver.ny());
}

LoopSystem sweep_system() {
    LoopSystem sys;
    sys.set_xi(1, 1, 30.0);
    sys.set_xi(2, 2, 20.0);
    sys.set_xi(3, 3, 20.0);
    sys.set_xi(1, 2, std::polar(30.0, 0.2 * M_PI));
    sys.set_xi(1, 3, 30.0);
    sys.kappa = critical_kappa(sys.xi(1, 1), 1.0);
    return sys;
}

void detuning_sweep_serial(benchmark::State& state) {
    set_exec_mode(ExecMode::serial);
    const LoopSystem sys = sweep_system();
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep_detuning(sys, -100.0, 100.0, 2001));
    set_exec_mode(ExecMode::parallel);
    state.SetItemsProcessed(state.iterations() * 2001);
}

void detuning_sweep_omp(benchmark::State& state) {
    set_exec_mode(ExecMode::parallel);
    const LoopSystem sys = sweep_system();
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep_detuning(sys, -100.0, 100.0, 2001));
    state.SetItemsProcessed(state.iterations() * 2001);
}

} // namespace

BENCHMARK(fdtd_step_reference)->Unit(benchmark::kMicrosecond);
BENCHMARK(fdtd_step_serial_mode)->Unit(benchmark::kMicrosecond);
BENCHMARK(fdtd_step_omp)->Unit(benchmark::kMicrosecond);
BENCHMARK(detuning_sweep_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(detuning_sweep_omp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
