#pragma once

#include <array>
#include <vector>

#include "loopres/system.hpp"

namespace loopres {

/// Eigendecomposition of the dynamics matrix. Canonical order: descending
/// imaginary part, ties broken by descending real part. energies are the
/// imaginary parts (the dressed-state eigenenergies, sign as in dC/dt = M C),
/// decay_rates the negated real parts.
struct EigenReport {
    std::array<cplx, 6> eigenvalues{};
    std::array<double, 6> energies{};
    std::array<double, 6> decay_rates{};
};

EigenReport eigen_report(const LoopSystem& sys);

enum class Periodicity { constant, pi_periodic, two_pi_periodic };

std::string to_string(Periodicity p);

/// Eigenenergy curves over one 2pi phase sweep of a chosen coupling, their
/// DFT power spectra, and the periodicity classification.
///
/// Curves are tracked by nearest-neighbor matching in the complex plane
/// between adjacent samples, seeded by the canonical order at phi = 0. If two
/// eigenvalues approach within 1e-9 at a sample the tracker flags a degeneracy
/// warning and falls back to sorted-by-energy order for that sample.
///
/// Power spectra use the unitary DFT, so sum_l power[l] equals the power of
/// the sampled curve (Parseval). Classification per curve: all nonzero-l
/// power below epsilon_const * max(dc power, n * spectrum-scale^2) ->
/// constant (the scale floor keeps curves centred at zero energy from being
/// judged against their own noise); all odd-l power below epsilon_odd *
/// total nonzero-l power -> pi-periodic; otherwise 2pi-periodic. All six
/// curves are analyzed and combined by worst case (any odd power forces
/// 2pi-periodic).
struct PeriodicityReport {
    std::vector<double> phase;                       // n samples on [0, 2pi)
    std::array<std::vector<double>, 6> curves;       // tracked energies per sample
    std::array<std::vector<double>, 6> power;        // |dft|^2 per curve, bins 0..n-1
    std::vector<double> power_total;                 // summed over the six curves
    Periodicity classification = Periodicity::constant;
    bool degeneracy_warning = false;
    double epsilon_odd = 1.0e-8;
    double epsilon_const = 1.0e-8;
};

/// n must be a power of two >= 64; |xi_w| must be nonzero.
PeriodicityReport periodicity(const LoopSystem& sys, CouplingIndex w, int n = 256);

/// Unitary-DFT power spectrum of a real sequence (test oracle helpers reuse it).
std::vector<double> dft_power(const std::vector<double>& samples);

} // namespace loopres
