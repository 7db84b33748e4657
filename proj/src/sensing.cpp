#include "loopres/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loopres {

cplx particle_scattering(const ParticleScenario& p) {
    p.validate();
    return std::polar(p.s0 * p.delta_eps, 2.0 * p.mode_number * p.theta);
}

LoopSystem apply_particle(const LoopSystem& sys, const ParticleScenario& p, bool compose) {
    const cplx induced = particle_scattering(p);
    LoopSystem out = sys;
    const cplx prior = compose ? sys.xi(p.resonator, p.resonator) : cplx{};
    out.set_xi(p.resonator, p.resonator, prior + induced);
    return out;
}

cplx slab_delta_xi(const SlabScenario& s) {
    s.validate();
    const double ratio = (s.eps_slab - s.eps_slab0) / (s.eps_slab0 - s.eps_surround);
    return ratio * s.xi_slab_ref;
}

cplx slab_coupling(const SlabScenario& s) {
    return s.xi_background + s.xi_slab_ref + slab_delta_xi(s);
}

LoopSystem apply_slab(const LoopSystem& sys, const SlabScenario& s) {
    LoopSystem out = sys;
    out.set_xi(s.pair, slab_coupling(s));
    return out;
}

ShiftReport match_features(const std::vector<ResonanceFeature>& baseline,
                           const std::vector<ResonanceFeature>& perturbed) {
    ShiftReport rep;
    std::vector<bool> base_used(baseline.size(), false);
    std::vector<bool> pert_used(perturbed.size(), false);

    // Globally nearest pairs first, so matching is symmetric in its arguments.
    struct Cand {
        double dist;
        std::size_t b, p;
    };
    std::vector<Cand> cands;
    for (std::size_t b = 0; b < baseline.size(); ++b)
        for (std::size_t p = 0; p < perturbed.size(); ++p) {
            if (baseline[b].kind != perturbed[p].kind ||
                baseline[b].channel != perturbed[p].channel)
                continue;
            cands.push_back({std::abs(baseline[b].location - perturbed[p].location), b, p});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.b != b.b) return a.b < b.b;
        return a.p < b.p;
    });
    for (const Cand& c : cands) {
        if (base_used[c.b] || pert_used[c.p]) continue;
        base_used[c.b] = pert_used[c.p] = true;
        rep.matched.push_back({baseline[c.b], perturbed[c.p],
                               perturbed[c.p].location - baseline[c.b].location});
    }
    for (std::size_t b = 0; b < baseline.size(); ++b)
        if (!base_used[b]) rep.unmatched_baseline.push_back(baseline[b]);
    for (std::size_t p = 0; p < perturbed.size(); ++p)
        if (!pert_used[p]) rep.unmatched_perturbed.push_back(perturbed[p]);
    return rep;
}

ShiftReport shift_readout(const Spectrum& baseline, const Spectrum& perturbed,
                          double prominence) {
    const bool same_grid = baseline.size() == perturbed.size() &&
                           baseline.delta_min == perturbed.delta_min &&
                           baseline.delta_max == perturbed.delta_max;
    if (!same_grid) throw invalid_parameter("shift_readout: spectra are on different grids");
    return match_features(find_resonances(baseline, prominence),
                          find_resonances(perturbed, prominence));
}

} // namespace loopres
