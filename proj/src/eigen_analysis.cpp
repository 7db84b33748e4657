#include "loopres/eigen_analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "loopres/cmt.hpp"

namespace loopres {

std::string to_string(Periodicity p) {
    switch (p) {
        case Periodicity::constant: return "constant";
        case Periodicity::pi_periodic: return "pi-periodic";
        case Periodicity::two_pi_periodic: return "2pi-periodic";
    }
    return "?";
}

namespace {

std::array<cplx, 6> solve_eigenvalues(const LoopSystem& sys) {
    const Matrix6c M = build_dynamics_matrix(sys);
    Eigen::ComplexEigenSolver<Matrix6c> solver(M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw numerical_error("eigen_report: eigensolver did not converge");
    std::array<cplx, 6> ev;
    for (int k = 0; k < 6; ++k) ev[k] = solver.eigenvalues()(k);
    return ev;
}

void canonical_sort(std::array<cplx, 6>& ev) {
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
        if (a.imag() != b.imag()) return a.imag() > b.imag();
        return a.real() > b.real();
    });
}

} // namespace

EigenReport eigen_report(const LoopSystem& sys) {
    EigenReport rep;
    rep.eigenvalues = solve_eigenvalues(sys);
    canonical_sort(rep.eigenvalues);
    for (int k = 0; k < 6; ++k) {
        rep.energies[k] = rep.eigenvalues[k].imag();
        rep.decay_rates[k] = -rep.eigenvalues[k].real();
    }
    return rep;
}

std::vector<double> dft_power(const std::vector<double>& samples) {
    const int n = int(samples.size());
    std::vector<double> power(n, 0.0);
    const double norm = 1.0 / std::sqrt(double(n));
    for (int l = 0; l < n; ++l) {
        double re = 0.0, im = 0.0;
        for (int k = 0; k < n; ++k) {
            const double ang = -2.0 * M_PI * double(l) * double(k) / double(n);
            re += samples[k] * std::cos(ang);
            im += samples[k] * std::sin(ang);
        }
        power[l] = (re * re + im * im) * norm * norm;
    }
    return power;
}

namespace {

Periodicity classify_curve(const std::vector<double>& power, double scale, double eps_odd,
                           double eps_const) {
    const int n = int(power.size());
    double dc = power[0], nonzero = 0.0, odd = 0.0;
    for (int l = 1; l < n; ++l) {
        nonzero += power[l];
        if (l % 2 == 1) odd += power[l];
    }
    // The dc term alone cannot flag curves centred at zero energy as
    // constant, so the spectrum-wide energy scale backs it up.
    const double floor = double(n) * scale * scale;
    if (nonzero <= eps_const * std::max(dc, floor)) return Periodicity::constant;
    if (odd <= eps_odd * nonzero) return Periodicity::pi_periodic;
    return Periodicity::two_pi_periodic;
}

} // namespace

PeriodicityReport periodicity(const LoopSystem& sys, CouplingIndex w, int n) {
    if (n < 64 || (n & (n - 1)) != 0)
        throw invalid_parameter("periodicity: n must be a power of two >= 64");
    if (std::abs(sys.xi(w)) == 0.0)
        throw invalid_parameter("periodicity: coupling modulus is zero, phase undefined");

    PeriodicityReport rep;
    rep.phase.resize(n);
    for (auto& c : rep.curves) c.resize(n);

    double scale = 0.0; // spectrum magnitude, floors the constant test
    std::array<cplx, 6> tracked{};
    for (int k = 0; k < n; ++k) {
        const double phi = 2.0 * M_PI * k / double(n);
        rep.phase[k] = phi;
        std::array<cplx, 6> ev = solve_eigenvalues(with_phase(sys, w, phi));

        bool degenerate = false;
        for (int a = 0; a < 6 && !degenerate; ++a)
            for (int b = a + 1; b < 6; ++b)
                if (std::abs(ev[a] - ev[b]) < 1.0e-9) {
                    degenerate = true;
                    break;
                }

        if (k == 0 || degenerate) {
            canonical_sort(ev);
            if (degenerate) rep.degeneracy_warning = true;
            tracked = ev;
        } else {
            // Greedy globally-nearest assignment against the previous sample.
            std::array<bool, 6> prev_used{}, cur_used{};
            std::array<cplx, 6> next{};
            for (int pick = 0; pick < 6; ++pick) {
                double best = std::numeric_limits<double>::infinity();
                int bi = -1, bj = -1;
                for (int i = 0; i < 6; ++i) {
                    if (prev_used[i]) continue;
                    for (int j = 0; j < 6; ++j) {
                        if (cur_used[j]) continue;
                        const double dist = std::abs(tracked[i] - ev[j]);
                        if (dist < best) {
                            best = dist;
                            bi = i;
                            bj = j;
                        }
                    }
                }
                prev_used[bi] = cur_used[bj] = true;
                next[bi] = ev[bj];
            }
            tracked = next;
        }
        for (int c = 0; c < 6; ++c) {
            rep.curves[c][k] = tracked[c].imag();
            scale = std::max(scale, std::abs(tracked[c]));
        }
    }

    rep.power_total.assign(n, 0.0);
    Periodicity overall = Periodicity::constant;
    for (int c = 0; c < 6; ++c) {
        rep.power[c] = dft_power(rep.curves[c]);
        for (int l = 0; l < n; ++l) rep.power_total[l] += rep.power[c][l];
        const Periodicity pc =
            classify_curve(rep.power[c], scale, rep.epsilon_odd, rep.epsilon_const);
        if (pc == Periodicity::two_pi_periodic) overall = pc;
        else if (pc == Periodicity::pi_periodic && overall == Periodicity::constant)
            overall = pc;
    }
    rep.classification = overall;
    return rep;
}

} // namespace loopres
