#include <algorithm>
#include <cmath>

#include "loopres/fdtd.hpp"

namespace loopres {
namespace fdtd {

FdtdScene build_scene(const LoopScene& scene, double wavelength, const RunControl& run,
                      const PmlSpec& pml) {
    FdtdScene out;
    PmlSpec p = pml;
    p.cells = scene.pml_cells;
    out.pml = p;
    out.run = run;
    out.eps = rasterize(scene.geometry, scene.domain, scene.cell);

    const auto to_i = [&](double x) {
        return int(std::lround((x - scene.domain.x0) / scene.cell - 0.5));
    };
    const auto to_j = [&](double y) {
        return int(std::lround((y - scene.domain.y0) / scene.cell - 0.5));
    };
    out.source.i = to_i(scene.source_x);
    out.source.j = to_j(scene.wg_center_y);
    out.source.wavelength = wavelength;

    // Probe on the Ey column nearest probe_x (Ey sits at integer i).
    out.probe.i = int(std::lround((scene.probe_x - scene.domain.x0) / scene.cell));
    out.probe.j0 = to_j(scene.wg_center_y - scene.probe_halfwidth);
    out.probe.j1 = to_j(scene.wg_center_y + scene.probe_halfwidth);

    out.validate();
    return out;
}

FluxResult run_raw_flux(const FdtdScene& scene) {
    FdtdSolver solver(scene);
    const double spc = solver.steps_per_cycle();
    const long window_steps = std::max<long>(1, std::lround(scene.run.window_cycles * spc));
    const long max_steps = std::lround(scene.run.max_cycles * spc);
    const double blowup = 1.0e6 * scene.source.amplitude;

    FluxResult res;
    res.wavelength = scene.source.wavelength;

    double prev_window = 0.0;
    bool have_prev = false;
    double peak_window = 0.0;
    long steps = 0;
    while (steps < max_steps) {
        double acc = 0.0;
        for (long k = 0; k < window_steps; ++k) {
            solver.step();
            acc += solver.probe_flux();
        }
        steps += window_steps;
        const double window_avg = acc / double(window_steps);
        peak_window = std::max(peak_window, std::abs(window_avg));
        if (solver.max_abs_hz() > blowup)
            throw numerical_error("fdtd: field blow-up (|Hz| above 1e6 x source amplitude)");

        if (have_prev) {
            // Relative change with a floor keyed to the largest window seen,
            // so near-zero fluxes deep in a resonance dip still converge.
            const double denom = std::max(std::abs(window_avg), 1.0e-3 * peak_window);
            const double rel = denom > 0.0 ? std::abs(window_avg - prev_window) / denom : 0.0;
            res.last_ratio = rel;
            if (rel < scene.run.rel_tol) {
                res.flux_raw = window_avg;
                res.converged = true;
                res.cycles_run = steps / spc;
                return res;
            }
        }
        prev_window = window_avg;
        have_prev = true;
    }
    res.flux_raw = prev_window;
    res.converged = false;
    res.cycles_run = steps / spc;
    return res;
}

FluxResult run_transmission(const LoopScene& scene, double wavelength, const RunControl& run,
                            const PmlSpec& pml, ReferenceCache* cache) {
    double ref_flux = 0.0;
    bool have_ref = false;
    if (cache) {
        const auto it = cache->find(wavelength);
        if (it != cache->end()) {
            ref_flux = it->second;
            have_ref = true;
        }
    }
    if (!have_ref) {
        const FluxResult ref = run_raw_flux(build_scene(strip_resonators(scene), wavelength,
                                                        run, pml));
        ref_flux = ref.flux_raw;
        if (cache) (*cache)[wavelength] = ref_flux;
    }
    if (!(ref_flux > 0.0))
        throw numerical_error("fdtd: non-positive reference flux, cannot normalize");

    FluxResult res = run_raw_flux(build_scene(scene, wavelength, run, pml));
    res.flux_normalized = res.flux_raw / ref_flux;
    return res;
}

std::vector<FluxResult> sweep_wavelength(const LoopScene& scene,
                                         const std::vector<double>& wavelengths,
                                         const RunControl& run, const PmlSpec& pml) {
    ReferenceCache cache;
    std::vector<FluxResult> out;
    out.reserve(wavelengths.size());
    for (double lam : wavelengths) {
        if (!(lam > 0.0)) throw invalid_parameter("sweep_wavelength: wavelengths must be > 0");
        try {
            out.push_back(run_transmission(scene, lam, run, pml, &cache));
        } catch (const std::exception& e) {
            FluxResult bad;
            bad.wavelength = lam;
            bad.error = e.what();
            out.push_back(bad);
        }
    }
    return out;
}

} // namespace fdtd
} // namespace loopres
