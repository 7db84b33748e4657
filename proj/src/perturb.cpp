#include "loopres/perturb.hpp"

#include <cmath>

#include "loopres/exec.hpp"

namespace loopres {

Matrix6c roundtrip_pattern(double phase) {
    Matrix6c M1 = Matrix6c::Zero();
    const cplx u = std::polar(1.0, phase);
    const cplx mi(0.0, -1.0);
    // a2 <- b3 and a3 <- b2 carry xi23; b2 <- a3 and b3 <- a2 its conjugate.
    M1(2, 5) = mi * u;
    M1(4, 3) = mi * u;
    M1(3, 4) = mi * std::conj(u);
    M1(5, 2) = mi * std::conj(u);
    return M1;
}

AmplitudeCoefficients amplitude_series(const Matrix6c& M0, const Matrix6c& M1,
                                       const Vector6c& drive, cplx a_in, double kappa) {
    Eigen::PartialPivLU<Matrix6c> lu(M0);
    const Vector6c y0 = lu.solve(drive);
    const Vector6c y1 = lu.solve(M1 * y0);
    const Vector6c y2 = lu.solve(M1 * y1);
    const cplx scale = std::sqrt(2.0 * kappa) / a_in;
    AmplitudeCoefficients c;
    c.c0 = -1.0 + scale * (-y0(0));
    c.c1 = scale * y1(0);
    c.c2 = scale * (-y2(0));
    return c;
}

namespace {

double full_transmission(const LoopSystem& base, double phase, double delta, double x) {
    LoopSystem sys = base;
    sys.set_xi(2, 3, std::polar(x, phase));
    sys.set_detuning(delta);
    return solve_steady_state(sys).T;
}

} // namespace

ExpansionReport expand_roundtrip(const LoopSystem& sys, double delta_min, double delta_max,
                                 int n, double x_eval) {
    if (n < 2) throw invalid_parameter("expand_roundtrip: need at least 2 grid points");
    if (!(delta_min < delta_max))
        throw invalid_parameter("expand_roundtrip: delta_min must be below delta_max");
    if (x_eval < 0.0) throw invalid_parameter("expand_roundtrip: x_eval must be >= 0");
    sys.validate();

    ExpansionReport rep;
    rep.xi23_phase = std::abs(sys.xi(2, 3)) > 0.0 ? std::arg(sys.xi(2, 3)) : 0.0;
    rep.base = sys;
    rep.base.set_xi(2, 3, 0.0);
    rep.x_eval = x_eval;
    rep.delta.resize(n);
    rep.c0.resize(n);
    rep.c1.resize(n);
    rep.c2.resize(n);
    rep.T_expanded.resize(n);
    rep.T_full.resize(n);

    const Matrix6c M1 = roundtrip_pattern(rep.xi23_phase);
    const double step = (delta_max - delta_min) / double(n - 1);
    std::exception_ptr err;
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (int i = 0; i < n; ++i) {
        try {
            const double d = delta_min + step * i;
            rep.delta[i] = d;
            LoopSystem local = rep.base;
            local.set_detuning(d);
            const Matrix6c M0 = build_dynamics_matrix(local);
            const AmplitudeCoefficients c =
                amplitude_series(M0, M1, drive_vector(local), local.a_in, local.kappa);
            rep.c0[i] = c.c0;
            rep.c1[i] = c.c1;
            rep.c2[i] = c.c2;
            rep.T_expanded[i] = std::norm(c.c0 + c.c1 * x_eval + c.c2 * x_eval * x_eval);
            rep.T_full[i] = full_transmission(rep.base, rep.xi23_phase, d, x_eval);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    rep.max_discrepancy = 0.0;
    for (int i = 0; i < n; ++i)
        rep.max_discrepancy =
            std::max(rep.max_discrepancy, std::abs(rep.T_expanded[i] - rep.T_full[i]));
    return rep;
}

double validate_expansion(const ExpansionReport& report, double x) {
    if (x < 0.0) throw invalid_parameter("validate_expansion: x must be >= 0");
    double sup = 0.0;
    for (std::size_t i = 0; i < report.delta.size(); ++i) {
        const double t_rec = std::norm(report.c0[i] + report.c1[i] * x + report.c2[i] * x * x);
        const double t_full =
            full_transmission(report.base, report.xi23_phase, report.delta[i], x);
        sup = std::max(sup, std::abs(t_rec - t_full));
    }
    return sup;
}

} // namespace loopres
