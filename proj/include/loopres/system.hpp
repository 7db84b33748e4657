#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "loopres/errors.hpp"

namespace loopres {

using cplx = std::complex<double>;

/// Index pair (i, j), 1-based, naming a coupling xi_ij. i == j names an
/// intracavity scattering parameter.
struct CouplingIndex {
    int i = 1;
    int j = 2;

    bool diagonal() const { return i == j; }
    bool operator==(const CouplingIndex&) const = default;
};

/// Three loop-coupled resonators probed by a fiber at resonator 1.
///
/// All rates are dimensionless multiples of the intrinsic loss gamma, which
/// fixes the frequency scale. xi is kept exactly symmetric by set_xi(). The
/// drive a_in defaults to 1 (real positive).
struct LoopSystem {
    std::array<double, 3> delta{0.0, 0.0, 0.0}; // Delta_l = omega_l - omega_in
    std::array<double, 3> gamma{1.0, 1.0, 1.0}; // intrinsic loss per resonator
    double kappa = 0.5;                         // fiber coupling to resonator 1
    cplx a_in{1.0, 0.0};

    cplx xi(int i, int j) const { return xi_[i - 1][j - 1]; }
    void set_xi(int i, int j, cplx value) {
        xi_[i - 1][j - 1] = value;
        xi_[j - 1][i - 1] = value;
    }
    cplx xi(CouplingIndex w) const { return xi(w.i, w.j); }
    void set_xi(CouplingIndex w, cplx value) { set_xi(w.i, w.j, value); }

    /// Phase of xi_ij in (-pi, pi]; zero for a zero-modulus entry.
    double phase(int i, int j) const {
        const cplx v = xi(i, j);
        if (v == cplx{}) return 0.0;
        const double p = std::arg(v);
        return p == -M_PI ? M_PI : p;
    }

    /// Uniform detuning: Delta_1 = Delta_2 = Delta_3.
    void set_detuning(double d) { delta = {d, d, d}; }

    void validate() const {
        for (double g : gamma)
            if (!(g > 0.0)) throw invalid_parameter("gamma must be positive");
        if (!(kappa > 0.0)) throw invalid_parameter("kappa must be positive");
    }

    bool operator==(const LoopSystem&) const = default;

  private:
    std::array<std::array<cplx, 3>, 3> xi_{};
};

/// Returns a copy of sys with xi_w replaced by |xi_w| e^{i phi} (symmetrically).
LoopSystem with_phase(const LoopSystem& sys, CouplingIndex w, double phi);

/// Steady-state amplitudes and fiber observables.
///
/// amplitudes is ordered (a1, b1, a2, b2, a3, b3). Occupancies are the scaled
/// quantities 2 kappa |.|^2 / |a_in|^2; phi_a = |arg(a1)| in [0, pi].
struct SteadyState {
    std::array<cplx, 6> amplitudes{};
    cplx a_out{};
    cplx b_out{};
    double T = 0.0;
    double R = 0.0;
    double occupancy_a1 = 0.0;
    double occupancy_b1 = 0.0;
    double phi_a = 0.0;
};

} // namespace loopres
