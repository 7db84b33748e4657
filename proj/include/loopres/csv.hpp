#pragma once

#include <string>
#include <vector>

#include "loopres/eigen_analysis.hpp"
#include "loopres/fdtd.hpp"
#include "loopres/perturb.hpp"
#include "loopres/sensing.hpp"
#include "loopres/spectra.hpp"

namespace loopres {

/// Full-precision (17 significant digits) decimal formatting.
std::string format_full(double v);

/// Header `delta,T,R,occ_a1,occ_b1,phi_a`, one row per grid point.
void write_spectrum_csv(const Spectrum& spec, const std::string& path);

/// Header `phi,T,R`.
void write_phase_sweep_csv(const std::vector<PhasePoint>& points, const std::string& path);

/// Header `index,re_lambda,im_lambda,energy,decay_rate`.
void write_eigen_csv(const EigenReport& rep, const std::string& path);

/// Curves table `phi,zeta_1..zeta_6` and power table `l,power` (power summed
/// over the six tracked curves).
void write_periodicity_csv(const PeriodicityReport& rep, const std::string& curves_path,
                           const std::string& power_path);

/// Header `delta,re_c0,im_c0,re_c1,im_c1,re_c2,im_c2,T_expanded,T_full`.
void write_expansion_csv(const ExpansionReport& rep, const std::string& path);

/// Header `feature_kind,location_baseline,location_perturbed,shift,width`;
/// unmatched features get an empty partner column and shift `nan`.
void write_shift_csv(const ShiftReport& rep, const std::string& path);

/// Header `lambda_nm,flux_raw,flux_normalized,converged`.
void write_flux_csv(const std::vector<fdtd::FluxResult>& results, const std::string& path);

} // namespace loopres
