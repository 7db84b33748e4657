#pragma once

#include <string>
#include <vector>

#include "loopres/system.hpp"

namespace loopres {

struct SpectrumPoint {
    double delta = 0.0;
    double T = 0.0;
    double R = 0.0;
    double occupancy_a1 = 0.0;
    double occupancy_b1 = 0.0;
    double phi_a = 0.0; // in [0, pi]; AVERAGED_PHI_SENTINEL after phase averaging
};

/// phi_a of phase-averaged spectra (the phase is meaningless after averaging).
inline constexpr double AVERAGED_PHI_SENTINEL = -1.0;

/// Transmission/reflection spectrum over a uniform detuning grid.
struct Spectrum {
    std::vector<SpectrumPoint> points;
    LoopSystem system;       // parameters used (phase-averaged: the phi = 0 member)
    double delta_min = 0.0;
    double delta_max = 0.0;

    std::size_t size() const { return points.size(); }
    double grid_step() const {
        return points.size() > 1 ? (delta_max - delta_min) / double(points.size() - 1) : 0.0;
    }
};

enum class FeatureKind { dip, peak };
enum class Channel { T, R };

/// Local extremum of a spectrum channel, parabolic-refined.
struct ResonanceFeature {
    FeatureKind kind = FeatureKind::dip;
    Channel channel = Channel::T;
    double location = 0.0;   // refined abscissa
    double value = 0.0;      // refined extremal value
    double width = 0.0;      // full width at half prominence
    double prominence = 0.0;
};

std::string to_string(FeatureKind k);
std::string to_string(Channel c);

/// n steady-state solves with Delta_1 = Delta_2 = Delta_3 swept uniformly over
/// [delta_min, delta_max]. Points are independent and evaluated in parallel
/// when enabled; assembly order is fixed, so output is identical to serial.
/// Solver failures are rethrown with the offending Delta attached.
Spectrum sweep_detuning(const LoopSystem& sys, double delta_min, double delta_max, int n);

struct PhasePoint {
    double phi = 0.0;
    double T = 0.0;
    double R = 0.0;
};

/// T, R at fixed detuning as xi_w sweeps |xi_w| e^{i phi} over [0, 2pi).
/// Throws invalid_parameter when |xi_w| = 0 (phase undefined).
std::vector<PhasePoint> sweep_phase(const LoopSystem& sys, CouplingIndex w, double delta,
                                    int n);

/// Arithmetic mean of T, R and occupancies over n_phase uniform phase samples
/// of xi_w, per detuning point. Rectangle rule on [0, 2pi), exact for
/// trigonometric polynomials of degree below n_phase. phi_a is set to
/// AVERAGED_PHI_SENTINEL.
Spectrum phase_average(const LoopSystem& sys, CouplingIndex w, double delta_min,
                       double delta_max, int n, int n_phase = 256);

/// Prominence-filtered local extrema of T and R with 3-point parabolic
/// location refinement and width from half-prominence crossings.
std::vector<ResonanceFeature> find_resonances(const Spectrum& spec, double prominence);

/// Extrema finder on a bare (x, y) table for one channel; used for detuning
/// spectra and FDTD wavelength spectra alike. Requires >= 5 points.
std::vector<ResonanceFeature> find_extrema(const std::vector<double>& x,
                                           const std::vector<double>& y, double prominence,
                                           Channel channel);

} // namespace loopres
