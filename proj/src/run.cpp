#include <filesystem>
#include <iostream>

#include "loopres/cmt.hpp"
#include "loopres/config.hpp"
#include "loopres/csv.hpp"
#include "loopres/eigen_analysis.hpp"
#include "loopres/fdtd.hpp"
#include "loopres/perturb.hpp"
#include "loopres/sensing.hpp"
#include "loopres/spectra.hpp"

namespace loopres {

namespace {

std::string out_path(const RunOptions& opt, const std::string& name) {
    return (std::filesystem::path(opt.output_dir) / name).string();
}

void say(const RunOptions& opt, const std::string& msg) {
    if (!opt.quiet) std::cout << msg << "\n";
}

ParticleScenario particle_from(const ParticleBlock& b, double theta_deg) {
    ParticleScenario p;
    p.resonator = b.resonator;
    p.theta = theta_deg * M_PI / 180.0;
    p.mode_number = b.m;
    p.delta_eps = b.delta_eps;
    p.s0 = b.s0;
    return p;
}

fdtd::LoopScene scene_from(const FdtdBlock& b) {
    fdtd::LoopSceneParams p;
    p.cell = b.cell_nm;
    p.include_rings = b.rings;
    p.particle_theta_deg = b.particle_theta_deg;
    p.particle_eps = b.particle_eps;
    p.slab_eps = b.slab_eps;
    p.margin = b.margin_nm;
    p.pml_cells = b.pml_cells;
    return fdtd::build_loop_scene(p);
}

fdtd::RunControl run_control_from(const FdtdBlock& b) {
    fdtd::RunControl rc;
    rc.max_cycles = b.max_cycles;
    rc.window_cycles = b.window_cycles;
    rc.rel_tol = b.rel_tol;
    return rc;
}

int run_fdtd_single(const RunConfig& cfg, const RunOptions& opt) {
    const fdtd::LoopScene scene = scene_from(cfg.fdtd);
    const fdtd::RunControl rc = run_control_from(cfg.fdtd);

    fdtd::FdtdScene ref_scene =
        fdtd::build_scene(fdtd::strip_resonators(scene), cfg.fdtd.lambda_nm, rc);
    const fdtd::FluxResult ref = fdtd::run_raw_flux(ref_scene);
    if (!(ref.flux_raw > 0.0))
        throw numerical_error("fdtd: non-positive reference flux, cannot normalize");

    fdtd::FdtdScene full_scene = fdtd::build_scene(scene, cfg.fdtd.lambda_nm, rc);
    fdtd::FluxResult res;
    if (cfg.fdtd.snapshot) {
        // Re-run with the solver exposed so the final field can be dumped.
        fdtd::FdtdSolver solver(full_scene);
        const double spc = solver.steps_per_cycle();
        const long window = std::max<long>(1, std::lround(rc.window_cycles * spc));
        const long max_steps = std::lround(rc.max_cycles * spc);
        double prev = 0.0, peak = 0.0;
        bool have_prev = false;
        res.wavelength = cfg.fdtd.lambda_nm;
        while (solver.step_count() < max_steps) {
            double acc = 0.0;
            for (long k = 0; k < window; ++k) {
                solver.step();
                acc += solver.probe_flux();
            }
            const double avg = acc / double(window);
            peak = std::max(peak, std::abs(avg));
            if (have_prev) {
                const double denom = std::max(std::abs(avg), 1.0e-3 * peak);
                res.last_ratio = denom > 0.0 ? std::abs(avg - prev) / denom : 0.0;
                if (res.last_ratio < rc.rel_tol) {
                    res.flux_raw = avg;
                    res.converged = true;
                    break;
                }
            }
            prev = avg;
            have_prev = true;
            res.flux_raw = avg;
        }
        res.cycles_run = solver.step_count() / spc;
        solver.dump_snapshot(out_path(opt, "snapshot_hz.bin"));
        say(opt, "snapshot written to snapshot_hz.bin (+ .txt sidecar)");
    } else {
        res = fdtd::run_raw_flux(full_scene);
    }
    res.flux_normalized = res.flux_raw / ref.flux_raw;
    write_flux_csv({res}, out_path(opt, "flux.csv"));
    say(opt, "T(" + std::to_string(cfg.fdtd.lambda_nm) +
                 " nm) = " + std::to_string(res.flux_normalized) +
                 (res.converged ? "" : "  [unconverged]"));
    return res.converged ? 0 : 4;
}

} // namespace

int run(const RunConfig& cfg, const RunOptions& opt) {
    std::filesystem::create_directories(opt.output_dir);
    const std::string& c = cfg.command;

    if (c == "spectrum") {
        const Spectrum spec = sweep_detuning(cfg.system.build(), cfg.sweep.delta_min,
                                             cfg.sweep.delta_max, cfg.sweep.points);
        write_spectrum_csv(spec, out_path(opt, "spectrum.csv"));
        say(opt, "spectrum.csv written (" + std::to_string(spec.size()) + " points)");
        return 0;
    }
    if (c == "phase-sweep") {
        const auto points = sweep_phase(cfg.system.build(), cfg.phase.which, cfg.phase.delta,
                                        cfg.phase.samples);
        write_phase_sweep_csv(points, out_path(opt, "phase_sweep.csv"));
        say(opt, "phase_sweep.csv written");
        return 0;
    }
    if (c == "average") {
        const Spectrum spec =
            phase_average(cfg.system.build(), cfg.average.which, cfg.sweep.delta_min,
                          cfg.sweep.delta_max, cfg.sweep.points, cfg.average.samples);
        write_spectrum_csv(spec, out_path(opt, "average.csv"));
        say(opt, "average.csv written");
        return 0;
    }
    if (c == "eigen") {
        const EigenReport rep = eigen_report(cfg.system.build());
        write_eigen_csv(rep, out_path(opt, "eigen.csv"));
        say(opt, "eigen.csv written");
        return 0;
    }
    if (c == "periodicity") {
        const PeriodicityReport rep =
            periodicity(cfg.system.build(), cfg.phase.which, cfg.phase.samples);
        write_periodicity_csv(rep, out_path(opt, "periodicity_curves.csv"),
                              out_path(opt, "periodicity_power.csv"));
        say(opt, "classification: " + to_string(rep.classification) +
                     (rep.degeneracy_warning ? "  [degeneracy warning]" : ""));
        return 0;
    }
    if (c == "taylor") {
        const ExpansionReport rep = expand_roundtrip(
            cfg.system.build(), cfg.sweep.delta_min, cfg.sweep.delta_max, cfg.sweep.points,
            cfg.taylor.x);
        write_expansion_csv(rep, out_path(opt, "taylor.csv"));
        say(opt, "taylor.csv written; max |T_expanded - T_full| = " +
                     std::to_string(rep.max_discrepancy));
        return 0;
    }
    if (c == "sense-particle") {
        const LoopSystem base = cfg.system.build();
        const LoopSystem baseline =
            cfg.particle.theta_ref_deg
                ? apply_particle(base, particle_from(cfg.particle, *cfg.particle.theta_ref_deg),
                                 cfg.particle.compose)
                : base;
        const LoopSystem perturbed = apply_particle(
            base, particle_from(cfg.particle, cfg.particle.theta_deg), cfg.particle.compose);
        const Spectrum sb = sweep_detuning(baseline, cfg.sweep.delta_min, cfg.sweep.delta_max,
                                           cfg.sweep.points);
        const Spectrum sp = sweep_detuning(perturbed, cfg.sweep.delta_min, cfg.sweep.delta_max,
                                           cfg.sweep.points);
        write_spectrum_csv(sb, out_path(opt, "sense_particle_baseline.csv"));
        write_spectrum_csv(sp, out_path(opt, "sense_particle_perturbed.csv"));
        const ShiftReport shifts = shift_readout(sb, sp, cfg.particle.prominence);
        write_shift_csv(shifts, out_path(opt, "sense_particle_shifts.csv"));
        say(opt, "sense_particle_shifts.csv written (" + std::to_string(shifts.matched.size()) +
                     " matched features)");
        return 0;
    }
    if (c == "sense-slab") {
        SlabScenario s;
        s.pair = cfg.slab.pair;
        s.xi_background = cfg.slab.xi_background.value();
        s.xi_slab_ref = cfg.slab.xi_slab.value();
        s.eps_slab0 = cfg.slab.eps_slab0;
        s.eps_surround = cfg.slab.eps_surround;
        s.eps_slab = cfg.slab.eps_slab0; // baseline: zero correction
        const LoopSystem base = cfg.system.build();
        const LoopSystem baseline = apply_slab(base, s);
        s.eps_slab = cfg.slab.eps_slab;
        const LoopSystem perturbed = apply_slab(base, s);
        const Spectrum sb = sweep_detuning(baseline, cfg.sweep.delta_min, cfg.sweep.delta_max,
                                           cfg.sweep.points);
        const Spectrum sp = sweep_detuning(perturbed, cfg.sweep.delta_min, cfg.sweep.delta_max,
                                           cfg.sweep.points);
        write_spectrum_csv(sb, out_path(opt, "sense_slab_baseline.csv"));
        write_spectrum_csv(sp, out_path(opt, "sense_slab_perturbed.csv"));
        const ShiftReport shifts = shift_readout(sb, sp, cfg.slab.prominence);
        write_shift_csv(shifts, out_path(opt, "sense_slab_shifts.csv"));
        say(opt, "sense_slab_shifts.csv written (" + std::to_string(shifts.matched.size()) +
                     " matched features)");
        return 0;
    }
    if (c == "fdtd-run") return run_fdtd_single(cfg, opt);
    if (c == "fdtd-sweep") {
        const fdtd::LoopScene scene = scene_from(cfg.fdtd);
        const auto results =
            fdtd::sweep_wavelength(scene, cfg.fdtd.lambda_list, run_control_from(cfg.fdtd));
        write_flux_csv(results, out_path(opt, "flux.csv"));
        bool all_ok = true;
        for (const auto& r : results) {
            if (!r.error.empty()) say(opt, "lambda " + std::to_string(r.wavelength) +
                                               " failed: " + r.error);
            all_ok = all_ok && r.converged && r.error.empty();
        }
        say(opt, "flux.csv written (" + std::to_string(results.size()) + " wavelengths)");
        return all_ok ? 0 : 4;
    }
    throw config_error("unknown command '" + c + "'");
}

} // namespace loopres
