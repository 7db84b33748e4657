#include "loopres/cmt.hpp"

#include <cmath>

namespace loopres {

LoopSystem with_phase(const LoopSystem& sys, CouplingIndex w, double phi) {
    LoopSystem out = sys;
    const double mod = std::abs(sys.xi(w));
    out.set_xi(w, std::polar(mod, phi));
    return out;
}

double critical_kappa(cplx xi11, double gamma1) {
    if (!(gamma1 > 0.0)) throw invalid_parameter("critical_kappa: gamma1 must be positive");
    return std::sqrt(std::norm(xi11) + 0.25 * gamma1 * gamma1);
}

Matrix6c build_dynamics_matrix(const LoopSystem& sys) {
    sys.validate();
    Matrix6c M = Matrix6c::Zero();
    const cplx mi(0.0, -1.0);
    const std::array<double, 3> total_decay = {
        2.0 * sys.kappa + sys.gamma[0], sys.gamma[1], sys.gamma[2]};
    for (int m = 0; m < 3; ++m) {
        const int am = 2 * m, bm = 2 * m + 1;
        const cplx diag = -(cplx(0.0, sys.delta[m]) + 0.5 * total_decay[m]);
        M(am, am) = diag;
        M(bm, bm) = diag;
        for (int n = 0; n < 3; ++n) {
            M(am, 2 * n + 1) += mi * sys.xi(m + 1, n + 1);
            M(bm, 2 * n) += mi * std::conj(sys.xi(n + 1, m + 1));
        }
    }
    return M;
}

Vector6c drive_vector(const LoopSystem& sys) {
    Vector6c d = Vector6c::Zero();
    d(0) = std::sqrt(2.0 * sys.kappa) * sys.a_in;
    return d;
}

SteadyState observables(const LoopSystem& sys, const Vector6c& amplitudes) {
    SteadyState s;
    for (int k = 0; k < 6; ++k) s.amplitudes[k] = amplitudes(k);
    const double root = std::sqrt(2.0 * sys.kappa);
    const double in2 = std::norm(sys.a_in);
    s.a_out = -sys.a_in + root * amplitudes(0);
    s.b_out = root * amplitudes(1);
    s.T = std::norm(s.a_out) / in2;
    s.R = std::norm(s.b_out) / in2;
    s.occupancy_a1 = 2.0 * sys.kappa * std::norm(amplitudes(0)) / in2;
    s.occupancy_b1 = 2.0 * sys.kappa * std::norm(amplitudes(1)) / in2;
    s.phi_a = std::abs(std::arg(amplitudes(0)));
    return s;
}

SteadyState solve_steady_state(const LoopSystem& sys) {
    const Matrix6c M = build_dynamics_matrix(sys);
    const Vector6c d = drive_vector(sys);
    Eigen::PartialPivLU<Matrix6c> lu(M);
    const Vector6c C = -lu.solve(d);
    const double residual = (M * C + d).norm();
    if (!std::isfinite(residual) || residual > 1.0e-8 * d.norm())
        throw numerical_error("solve_steady_state: dynamics matrix is numerically singular");
    return observables(sys, C);
}

namespace {

double gershgorin_bound(const Matrix6c& M) {
    double bound = 0.0;
    for (int i = 0; i < 6; ++i) {
        double row = 0.0;
        for (int j = 0; j < 6; ++j) row += std::abs(M(i, j));
        bound = std::max(bound, row);
    }
    return bound;
}

} // namespace

SteadyState integrate_to_steady(const LoopSystem& sys, double t_end, double dt) {
    const Matrix6c M = build_dynamics_matrix(sys);
    const Vector6c d = drive_vector(sys);
    if (dt <= 0.0) dt = 0.9 / std::max(1.0, gershgorin_bound(M));

    const double tol = 1.0e-10 * std::max(1.0, d.norm());
    Vector6c C = Vector6c::Zero();
    double residual = d.norm();
    for (double t = 0.0; t <= t_end; t += dt) {
        const Vector6c k1 = M * C + d;
        residual = k1.norm();
        if (residual <= tol) return observables(sys, C);
        const Vector6c k2 = M * (C + 0.5 * dt * k1) + d;
        const Vector6c k3 = M * (C + 0.5 * dt * k2) + d;
        const Vector6c k4 = M * (C + dt * k3) + d;
        C += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!C.allFinite())
            throw numerical_error("integrate_to_steady: state diverged (unstable step?)");
    }
    throw convergence_error("integrate_to_steady: residual " + std::to_string(residual) +
                                " above tolerance at t_end",
                            residual);
}

double stationarity_residual(const LoopSystem& sys, const SteadyState& state) {
    const Matrix6c M = build_dynamics_matrix(sys);
    const Vector6c d = drive_vector(sys);
    Vector6c C;
    for (int k = 0; k < 6; ++k) C(k) = state.amplitudes[k];
    return (M * C + d).norm();
}

} // namespace loopres
