// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criterion 5a (second-order reconstruction within 0.02
// sup-norm at xi23 = 3 gamma) is known-red: the quadratic truncation cannot
// follow the narrow dressed resonances near Delta = +-20, where the true
// discrepancy is ~0.5 (see README, "Known limitation"). The check is kept at
// its stated bound rather than loosened.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "loopres/cmt.hpp"
#include "loopres/eigen_analysis.hpp"
#include "loopres/fdtd.hpp"
#include "loopres/perturb.hpp"
#include "loopres/sensing.hpp"
#include "loopres/spectra.hpp"

using namespace loopres;

namespace {

int g_failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

LoopSystem loop_system(double xi11, double xi22, double xi33, cplx xi12, cplx xi13,
                       cplx xi23) {
    LoopSystem sys;
    sys.set_xi(1, 1, xi11);
    sys.set_xi(2, 2, xi22);
    sys.set_xi(3, 3, xi33);
    sys.set_xi(1, 2, xi12);
    sys.set_xi(1, 3, xi13);
    sys.set_xi(2, 3, xi23);
    sys.kappa = critical_kappa(sys.xi(1, 1), sys.gamma[0]);
    return sys;
}

double max_t_asym(const Spectrum& s) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        m = std::max(m, std::abs(s.points[i].T - s.points[s.size() - 1 - i].T));
    return m;
}

double max_r_asym(const Spectrum& s) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        m = std::max(m, std::abs(s.points[i].R - s.points[s.size() - 1 - i].R));
    return m;
}

void criterion_1() {
    LoopSystem sys; // all xi = 0, gamma = 1, kappa = critical = 0.5
    sys.kappa = critical_kappa(0.0, 1.0);
    sys.set_detuning(0.0);
    const double t0 = solve_steady_state(sys).T;
    sys.set_detuning(1000.0);
    const double tp = solve_steady_state(sys).T;
    sys.set_detuning(-1000.0);
    const double tm = solve_steady_state(sys).T;
    char buf[160];
    std::snprintf(buf, sizeof buf, "T(0) = %.3e (<= 1e-10), T(+-1e3) = %.6f/%.6f (>= 0.999)",
                  t0, tp, tm);
    report("1 critical-coupling extinction", t0 <= 1e-10 && tp >= 0.999 && tm >= 0.999, buf);
}

void criterion_2() {
    LoopSystem sys =
        loop_system(30, 20, 20, std::polar(30.0, 0.2 * M_PI), 30.0, 0.0);
    sys.set_detuning(20.0);
    const double tp = solve_steady_state(sys).T;
    sys.set_detuning(-20.0);
    const double tm = solve_steady_state(sys).T;
    char buf[120];
    std::snprintf(buf, sizeof buf, "T(+20) = %.4f, T(-20) = %.4f (0.82 +- 0.02)", tp, tm);
    report("2 side-resonance point value", std::abs(tp - 0.82) <= 0.02 &&
                                               std::abs(tm - 0.82) <= 0.02,
           buf);
}

void criterion_3() {
    const LoopSystem a = loop_system(30, 20, 20, 30.0, 30.0, 0.0);
    const LoopSystem b = loop_system(30, 20, 20, std::polar(30.0, 0.2 * M_PI), 30.0, 0.0);
    const Spectrum sa = sweep_detuning(a, -100.0, 100.0, 2001);
    const Spectrum sb = sweep_detuning(b, -100.0, 100.0, 2001);
    const double a_t = max_t_asym(sa), a_r = max_r_asym(sa);
    const double b_t = max_t_asym(sb), b_r = max_r_asym(sb);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "zero phases: asym(T) = %.1e, asym(R) = %.1e (<= 1e-10); "
                  "phi12 = 0.2pi: asym(T) = %.1e (<= 1e-10), asym(R) = %.2e (>= 1e-2)",
                  a_t, a_r, b_t, b_r);
    report("3 spectral symmetry dichotomy",
           a_t <= 1e-10 && a_r <= 1e-10 && b_t <= 1e-10 && b_r >= 1e-2, buf);
}

void criterion_4() {
    const LoopSystem no_loop = loop_system(30, 20, 20, 30.0, 30.0, 0.0);
    const PeriodicityReport pa = periodicity(no_loop, {1, 2}, 256);
    double worst_odd_fraction = 0.0;
    for (int c = 0; c < 6; ++c) {
        double odd = 0.0, nonzero = 0.0;
        for (int l = 1; l < 256; ++l) {
            nonzero += pa.power[c][l];
            if (l % 2) odd += pa.power[c][l];
        }
        if (nonzero > 0.0) worst_odd_fraction = std::max(worst_odd_fraction, odd / nonzero);
    }

    const LoopSystem with_loop = loop_system(30, 20, 20, 30.0, 30.0, 15.0);
    const PeriodicityReport pb = periodicity(with_loop, {1, 2}, 256);
    double best_odd_ratio = 0.0;
    for (int c = 0; c < 6; ++c) {
        double dominant = 0.0, odd_max = 0.0;
        for (int l = 1; l < 256; ++l) {
            dominant = std::max(dominant, pb.power[c][l]);
            if (l % 2) odd_max = std::max(odd_max, pb.power[c][l]);
        }
        if (dominant > 0.0) best_odd_ratio = std::max(best_odd_ratio, odd_max / dominant);
    }

    const bool ok = pa.classification == Periodicity::pi_periodic &&
                    worst_odd_fraction <= 1e-8 &&
                    pb.classification == Periodicity::two_pi_periodic &&
                    best_odd_ratio >= 1e-3;
    char buf[220];
    std::snprintf(buf, sizeof buf,
                  "xi23 = 0: %s, odd power fraction %.1e (<= 1e-8); "
                  "xi23 = 15: %s, max odd/dominant %.2e (>= 1e-3)",
                  to_string(pa.classification).c_str(), worst_odd_fraction,
                  to_string(pb.classification).c_str(), best_odd_ratio);
    report("4 periodicity classification", ok, buf);
}

void criterion_5() {
    const LoopSystem sys = loop_system(50, 20, 20, 10.0, 30.0, 0.0);
    const ExpansionReport rep = expand_roundtrip(sys, -100.0, 100.0, 2001, 3.0);

    // 5a: sup-norm of the reconstruction (stated bound 0.02; known-red).
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "sup |T_rec - T_full| = %.3f at xi23 = 3 (bound 0.02; quadratic "
                  "truncation cannot follow the narrow resonances, see README)",
                  rep.max_discrepancy);
    report("5a expansion sup-norm", rep.max_discrepancy <= 0.02, buf);

    // 5b: the two largest |c2| local maxima sit within 2 of +-20.
    std::vector<std::pair<double, double>> peaks; // (value, where)
    for (std::size_t i = 1; i + 1 < rep.delta.size(); ++i) {
        const double v = std::abs(rep.c2[i]);
        if (v > std::abs(rep.c2[i - 1]) && v > std::abs(rep.c2[i + 1]))
            peaks.push_back({v, rep.delta[i]});
    }
    std::sort(peaks.rbegin(), peaks.rend());
    bool peaks_ok = peaks.size() >= 2;
    double p0 = 0.0, p1 = 0.0;
    if (peaks_ok) {
        p0 = peaks[0].second;
        p1 = peaks[1].second;
        const double lo = std::min(p0, p1), hi = std::max(p0, p1);
        peaks_ok = std::abs(lo + 20.0) <= 2.0 && std::abs(hi - 20.0) <= 2.0;
    }
    std::snprintf(buf, sizeof buf, "two largest |c2| maxima at Delta = %.2f, %.2f (+-20 +- 2)",
                  p0, p1);
    report("5b second-order resonance locations", peaks_ok, buf);

    // 5c: Richardson finite differences reproduce c1 and c2 to 1e-6 relative.
    const auto amplitude = [&](double delta, double x) {
        LoopSystem probe = sys;
        probe.set_xi(2, 3, std::polar(std::abs(x), x >= 0.0 ? 0.0 : M_PI));
        probe.set_detuning(delta);
        return solve_steady_state(probe).a_out / probe.a_in;
    };
    double worst_rel = 0.0;
    const double h = 1e-4;
    for (std::size_t i = 0; i < rep.delta.size(); i += 100) {
        const double d = rep.delta[i];
        const cplx fp = amplitude(d, h), fm = amplitude(d, -h);
        const cplx fp2 = amplitude(d, 2 * h), fm2 = amplitude(d, -2 * h);
        const cplx f0 = amplitude(d, 0.0);
        const cplx c1h = (fp - fm) / (2 * h), c12h = (fp2 - fm2) / (4 * h);
        const cplx c1 = (4.0 * c1h - c12h) / 3.0;
        const cplx c2h = (fp - 2.0 * f0 + fm) / (h * h);
        const cplx c22h = (fp2 - 2.0 * f0 + fm2) / (4 * h * h);
        const cplx c2 = 0.5 * (4.0 * c2h - c22h) / 3.0;
        worst_rel = std::max(worst_rel,
                             std::abs(rep.c1[i] - c1) / std::max(1.0, std::abs(c1)));
        worst_rel = std::max(worst_rel,
                             std::abs(rep.c2[i] - c2) / std::max(1.0, std::abs(c2)));
    }
    std::snprintf(buf, sizeof buf, "worst relative deviation %.2e (<= 1e-6)", worst_rel);
    report("5c finite-difference oracle", worst_rel <= 1e-6, buf);
}

void criterion_6() {
    const LoopSystem closed = loop_system(30, 20, 20, 30.0, 30.0, 0.0);
    const Spectrum c12 = phase_average(closed, {1, 2}, -100.0, 100.0, 2001, 256);
    const Spectrum c22 = phase_average(closed, {2, 2}, -100.0, 100.0, 2001, 256);
    double agree = 0.0;
    for (std::size_t i = 0; i < c12.size(); ++i) {
        agree = std::max(agree, std::abs(c12.points[i].T - c22.points[i].T));
        agree = std::max(agree, std::abs(c12.points[i].R - c22.points[i].R));
    }

    const LoopSystem open = loop_system(30, 20, 20, 30.0, 30.0, 15.0);
    const Spectrum o12 = phase_average(open, {1, 2}, -100.0, 100.0, 2001, 256);
    const Spectrum o22 = phase_average(open, {2, 2}, -100.0, 100.0, 2001, 256);
    double differ = 0.0;
    for (std::size_t i = 0; i < o12.size(); ++i)
        differ = std::max(differ, std::abs(o12.points[i].T - o22.points[i].T));

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "xi23 = 0: max averaging difference %.1e (<= 1e-6); "
                  "xi23 = 15: %.3f (>= 1e-3)",
                  agree, differ);
    report("6 averaging equivalence gate", agree <= 1e-6 && differ >= 1e-3, buf);
}

void criterion_7() {
    std::mt19937_64 rng(0x5eedull);
    std::uniform_real_distribution<double> mod(0.0, 50.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> det(-100.0, 100.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        LoopSystem sys;
        for (int i = 1; i <= 3; ++i)
            for (int j = i; j <= 3; ++j) sys.set_xi(i, j, std::polar(mod(rng), ang(rng)));
        sys.set_detuning(det(rng));
        sys.kappa = critical_kappa(sys.xi(1, 1), 1.0);
        const SteadyState a = solve_steady_state(sys);
        const SteadyState b = integrate_to_steady(sys);
        for (int k = 0; k < 6; ++k)
            worst = std::max(worst, std::abs(a.amplitudes[k] - b.amplitudes[k]));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "worst elementwise deviation %.2e over 100 sets (<= 1e-8)",
                  worst);
    report("7 steady-state oracle", worst <= 1e-8, buf);
}

void criterion_8() {
    const LoopSystem base = loop_system(50, 20, 20, 10.0, 30.0, 5.0);
    ParticleScenario p;
    p.resonator = 2;
    p.mode_number = 52;
    p.s0 = 20.0;
    p.delta_eps = 1.0;

    p.theta = 90.0 * M_PI / 180.0;
    const Spectrum s90 = sweep_detuning(apply_particle(base, p), -100.0, 100.0, 2001);
    p.theta = 90.0 * M_PI / 180.0 + M_PI / 52.0;
    const Spectrum wrap = sweep_detuning(apply_particle(base, p), -100.0, 100.0, 2001);
    double wrap_diff = 0.0;
    for (std::size_t i = 0; i < s90.size(); ++i) {
        wrap_diff = std::max(wrap_diff, std::abs(s90.points[i].T - wrap.points[i].T));
        wrap_diff = std::max(wrap_diff, std::abs(s90.points[i].R - wrap.points[i].R));
    }

    p.theta = 95.0 * M_PI / 180.0;
    const Spectrum s95 = sweep_detuning(apply_particle(base, p), -100.0, 100.0, 2001);
    const ShiftReport shifts = shift_readout(s90, s95, 0.05);
    double biggest = 0.0;
    for (const FeatureShift& m : shifts.matched)
        biggest = std::max(biggest, std::abs(m.shift));
    const double step = s90.grid_step();

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "wrap distance %.1e (<= 1e-10); 5-degree shift %.2f vs grid step %.2f",
                  wrap_diff, biggest, step);
    report("8 sensing phase wrap and sensitivity", wrap_diff <= 1e-10 && biggest > step, buf);
}

// Reduced-tier FDTD gates. Bands are pinned from the calibration scan of the
// 60 nm rasterized scene (see configs/fig11.cfg, fig12.cfg).
void criterion_9() {
    using namespace loopres::fdtd;
    RunControl rc;
    rc.max_cycles = 800.0;

    // 9a: resonator-free waveguide normalizes to 1.
    LoopSceneParams empty;
    empty.cell = 60.0;
    empty.include_rings = false;
    const FluxResult norm = run_transmission(build_loop_scene(empty), 571.8, rc);
    char buf[200];
    std::snprintf(buf, sizeof buf, "empty-waveguide normalization %.4f (1 +- 0.05)%s",
                  norm.flux_normalized, norm.converged ? "" : " [unconverged]");
    report("9a fdtd normalization", std::abs(norm.flux_normalized - 1.0) <= 0.05, buf);

    // 9b: slab 4.0 -> 4.1 moves one tracked dip by more than a sweep step
    // while another feature moves by less than one step.
    const std::vector<double> slab_band = {568.0, 568.4, 568.8, 569.2, 569.6, 570.0,
                                           574.0, 574.4, 574.8, 575.2, 575.6, 576.0};
    LoopSceneParams slab_a;
    slab_a.cell = 60.0;
    slab_a.slab_eps = 4.0;
    LoopSceneParams slab_b = slab_a;
    slab_b.slab_eps = 4.1;
    const auto flux_a = sweep_wavelength(build_loop_scene(slab_a), slab_band, rc);
    const auto flux_b = sweep_wavelength(build_loop_scene(slab_b), slab_band, rc);
    const auto dips = [](const std::vector<FluxResult>& f) {
        std::vector<double> x, y;
        for (const auto& r : f) {
            x.push_back(r.wavelength);
            y.push_back(r.flux_normalized);
        }
        return find_extrema(x, y, 0.02, Channel::T);
    };
    const ShiftReport slab_shifts = match_features(dips(flux_a), dips(flux_b));
    double slab_big = 0.0, slab_small = 1e300;
    for (const FeatureShift& m : slab_shifts.matched) {
        slab_big = std::max(slab_big, std::abs(m.shift));
        slab_small = std::min(slab_small, std::abs(m.shift));
    }
    const double slab_step = 0.4;
    std::snprintf(buf, sizeof buf,
                  "slab shifts: largest %.3f nm, smallest %.3f nm vs step %.1f nm "
                  "(%zu features)",
                  slab_big, slab_small == 1e300 ? 0.0 : slab_small, slab_step,
                  slab_shifts.matched.size());
    report("9b fdtd slab shift", slab_shifts.matched.size() >= 2 && slab_big > slab_step &&
                                     slab_small < slab_step,
           buf);

    // 9c: particle 90 -> 180 degrees moves a tracked dip by more than a step.
    const std::vector<double> particle_band = {568.0, 568.4, 568.8, 569.2, 569.6, 570.0};
    LoopSceneParams part_a;
    part_a.cell = 60.0;
    part_a.particle_theta_deg = 90.0;
    LoopSceneParams part_b = part_a;
    part_b.particle_theta_deg = 180.0;
    const auto pf_a = sweep_wavelength(build_loop_scene(part_a), particle_band, rc);
    const auto pf_b = sweep_wavelength(build_loop_scene(part_b), particle_band, rc);
    const ShiftReport part_shifts = match_features(dips(pf_a), dips(pf_b));
    double part_big = 0.0;
    for (const FeatureShift& m : part_shifts.matched)
        part_big = std::max(part_big, std::abs(m.shift));
    std::snprintf(buf, sizeof buf, "particle shift %.3f nm vs step %.1f nm (%zu features)",
                  part_big, slab_step, part_shifts.matched.size());
    report("9c fdtd particle shift", !part_shifts.matched.empty() && part_big > slab_step,
           buf);
}

} // namespace

int main(int argc, char** argv) {
    const bool cmt_only = argc > 1 && std::string(argv[1]) == "--cmt-only";
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (!cmt_only) criterion_9();
    std::printf("[NOTE] criterion 10: full-resolution field-pattern reproduction is a "
                "documented manual recipe (configs/fig9.cfg, README), not a CI gate\n");
    if (g_failures > 0) {
        std::printf("%d criterion check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criterion checks passed\n");
    return 0;
}
