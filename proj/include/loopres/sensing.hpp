#pragma once

#include <vector>

#include "loopres/spectra.hpp"
#include "loopres/system.hpp"

namespace loopres {

/// Nanoparticle near resonator `resonator`: the induced intracavity
/// scattering is s0 * delta_eps * e^{2 i m theta}. The unevaluated mode-field
/// overlap integral is absorbed into the calibration magnitude s0.
struct ParticleScenario {
    int resonator = 2;
    double theta = 0.0;     // azimuthal angle, radians
    int mode_number = 1;    // azimuthal mode number m >= 1
    double delta_eps = 1.0; // permittivity contrast at the particle
    double s0 = 0.0;        // calibration magnitude >= 0

    void validate() const {
        if (resonator < 1 || resonator > 3)
            throw invalid_parameter("particle: resonator index must be 1..3");
        if (mode_number < 1) throw invalid_parameter("particle: mode number must be >= 1");
        if (s0 < 0.0) throw invalid_parameter("particle: s0 must be >= 0");
    }
};

cplx particle_scattering(const ParticleScenario& p);

/// Replaces (compose = false) or adds to (compose = true) the target
/// resonator's diagonal scattering entry.
LoopSystem apply_particle(const LoopSystem& sys, const ParticleScenario& p,
                          bool compose = false);

/// Dielectric slab between the coupled pair: total coupling
/// xi = xi0 + xi_slab_ref + delta_xi with
/// delta_xi = (eps_slab - eps_slab0)/(eps_slab0 - eps_surround) * xi_slab_ref.
struct SlabScenario {
    CouplingIndex pair{2, 3};
    cplx xi_background{};   // coupling without slab
    cplx xi_slab_ref{};     // slab contribution at eps_slab0
    double eps_slab0 = 4.0; // reference slab permittivity
    double eps_surround = 1.0;
    double eps_slab = 4.0;  // actual slab permittivity

    void validate() const {
        if (eps_slab0 == eps_surround)
            throw invalid_parameter("slab: eps_slab0 must differ from the surrounding");
    }
};

cplx slab_delta_xi(const SlabScenario& s);
cplx slab_coupling(const SlabScenario& s);

/// Replaces the pair's coupling entry with slab_coupling(s).
LoopSystem apply_slab(const LoopSystem& sys, const SlabScenario& s);

struct FeatureShift {
    ResonanceFeature baseline;
    ResonanceFeature perturbed;
    double shift = 0.0; // perturbed.location - baseline.location
};

struct ShiftReport {
    std::vector<FeatureShift> matched;
    std::vector<ResonanceFeature> unmatched_baseline;
    std::vector<ResonanceFeature> unmatched_perturbed;
};

/// Pairs features of equal kind and channel by globally nearest location
/// (symmetric greedy matching), leaving the rest unmatched.
ShiftReport match_features(const std::vector<ResonanceFeature>& baseline,
                           const std::vector<ResonanceFeature>& perturbed);

/// Feature shifts between two spectra on the same detuning grid.
/// Throws invalid_parameter on grid mismatch.
ShiftReport shift_readout(const Spectrum& baseline, const Spectrum& perturbed,
                          double prominence);

} // namespace loopres
