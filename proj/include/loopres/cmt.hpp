#pragma once

#include <Eigen/Dense>

#include "loopres/system.hpp"

namespace loopres {

using Matrix6c = Eigen::Matrix<cplx, 6, 6>;
using Vector6c = Eigen::Matrix<cplx, 6, 1>;

/// Critical fiber coupling kappa = sqrt(|xi11|^2 + (gamma1/2)^2).
/// Uses the modulus of xi11, so kappa is real and phase sweeps of xi11 leave
/// it unchanged. Throws invalid_parameter for gamma1 <= 0.
double critical_kappa(cplx xi11, double gamma1);

/// Dynamics matrix M of dC/dt = M C + drive, with C = (a1,b1,a2,b2,a3,b3).
///
/// Row a_m: -(i Delta_m + gamma_am/2) on the diagonal, -i xi_mn to each b_n.
/// Row b_m: -(i Delta_m + gamma_bm/2) on the diagonal, -i conj(xi_nm) to each a_n.
/// Total decays: gamma_a1 = gamma_b1 = 2 kappa + gamma_1, all others gamma_n.
Matrix6c build_dynamics_matrix(const LoopSystem& sys);

/// Drive vector: sqrt(2 kappa) a_in in the a1 slot, zero elsewhere.
Vector6c drive_vector(const LoopSystem& sys);

/// Fills the fiber observables for a given amplitude vector:
/// a_out = -a_in + sqrt(2 kappa) a1, b_out = sqrt(2 kappa) b1,
/// T = |a_out|^2/|a_in|^2, R = |b_out|^2/|a_in|^2.
SteadyState observables(const LoopSystem& sys, const Vector6c& amplitudes);

/// Steady state C = -M^{-1} drive via dense LU with partial pivoting.
/// Throws numerical_error if M is numerically singular.
SteadyState solve_steady_state(const LoopSystem& sys);

/// Time-integration oracle: classical RK4 on dC/dt = M C + drive from C = 0
/// until ||M C + drive|| <= 1e-10 max(1, ||drive||). The fixed step
/// dt = 0.9 / GershgorinBound(M) keeps dt |lambda|_max < 1; the endpoint is
/// set by the residual stop, not dt, since the steady state is an exact fixed
/// point of the RK4 map. Throws convergence_error when t_end is exceeded.
SteadyState integrate_to_steady(const LoopSystem& sys, double t_end = 1.0e4,
                                double dt = 0.0);

/// Residual ||M C + drive|| of a solved state, for stationarity checks.
double stationarity_residual(const LoopSystem& sys, const SteadyState& state);

} // namespace loopres
