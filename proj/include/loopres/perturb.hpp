#pragma once

#include <vector>

#include "loopres/cmt.hpp"
#include "loopres/system.hpp"

namespace loopres {

/// First three Taylor coefficients of the transmission amplitude
/// <a_out>/a_in in x = |xi23|/gamma around xi23 = 0.
struct AmplitudeCoefficients {
    cplx c0{};
    cplx c1{};
    cplx c2{};
};

/// Coefficients from the resolvent (Neumann) series of M(x) = M0 + x M1:
///   C(x) = -(M0^-1 - x M0^-1 M1 M0^-1 + x^2 M0^-1 M1 M0^-1 M1 M0^-1) drive.
/// c2 already carries the 1/2! factor, so amplitude ~= c0 + c1 x + c2 x^2.
AmplitudeCoefficients amplitude_series(const Matrix6c& M0, const Matrix6c& M1,
                                       const Vector6c& drive, cplx a_in, double kappa);

/// The xi23 coupling pattern with unit modulus and the given phase; M(x) for
/// xi23 = x e^{i phase} equals M0 + x * this.
Matrix6c roundtrip_pattern(double phase);

struct ExpansionReport {
    std::vector<double> delta;       // uniform grid
    std::vector<cplx> c0, c1, c2;    // per grid point
    double x_eval = 0.0;             // |xi23|/gamma of the reconstruction below
    std::vector<double> T_expanded;  // |c0 + c1 x + c2 x^2|^2 at x_eval
    std::vector<double> T_full;      // full solve with xi23 = x_eval e^{i phase}
    double max_discrepancy = 0.0;    // sup |T_expanded - T_full| over the grid
    LoopSystem base;                 // sys with xi23 = 0
    double xi23_phase = 0.0;         // expansion direction, taken from sys
};

/// Expands around xi23 = 0 with the phase of sys.xi(2,3) held fixed; any
/// nonzero |xi23| present in sys only sets x implicitly through x_eval.
ExpansionReport expand_roundtrip(const LoopSystem& sys, double delta_min, double delta_max,
                                 int n, double x_eval);

/// Sup over the report grid of |reconstructed T - full-solve T| at x >= 0.
double validate_expansion(const ExpansionReport& report, double x);

} // namespace loopres
