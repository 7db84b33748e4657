#include "loopres/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "loopres/cmt.hpp"
#include "loopres/exec.hpp"

namespace loopres {

std::string to_string(FeatureKind k) { return k == FeatureKind::dip ? "dip" : "peak"; }
std::string to_string(Channel c) { return c == Channel::T ? "T" : "R"; }

namespace {

SpectrumPoint point_from_state(double delta, const SteadyState& s) {
    return {delta, s.T, s.R, s.occupancy_a1, s.occupancy_b1, s.phi_a};
}

// Runs fn(i) for i in [0, n) in parallel when enabled; the first exception is
// rethrown on the calling thread with the grid index preserved by fn itself.
template <typename Fn>
void for_each_index(int n, Fn&& fn) {
    std::exception_ptr err;
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (int i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

} // namespace

Spectrum sweep_detuning(const LoopSystem& sys, double delta_min, double delta_max, int n) {
    if (n < 2) throw invalid_parameter("sweep_detuning: need at least 2 points");
    if (!(delta_min < delta_max))
        throw invalid_parameter("sweep_detuning: delta_min must be below delta_max");

    Spectrum spec;
    spec.system = sys;
    spec.delta_min = delta_min;
    spec.delta_max = delta_max;
    spec.points.resize(n);

    const double step = (delta_max - delta_min) / double(n - 1);
    for_each_index(n, [&](int i) {
        const double d = delta_min + step * i;
        LoopSystem local = sys;
        local.set_detuning(d);
        try {
            spec.points[i] = point_from_state(d, solve_steady_state(local));
        } catch (const numerical_error& e) {
            throw numerical_error(std::string(e.what()) + " at delta = " + std::to_string(d));
        }
    });
    return spec;
}

std::vector<PhasePoint> sweep_phase(const LoopSystem& sys, CouplingIndex w, double delta,
                                    int n) {
    if (n < 2) throw invalid_parameter("sweep_phase: need at least 2 samples");
    if (std::abs(sys.xi(w)) == 0.0)
        throw invalid_parameter("sweep_phase: coupling modulus is zero, phase undefined");

    std::vector<PhasePoint> out(n);
    for_each_index(n, [&](int k) {
        const double phi = 2.0 * M_PI * k / double(n);
        LoopSystem local = with_phase(sys, w, phi);
        local.set_detuning(delta);
        const SteadyState s = solve_steady_state(local);
        out[k] = {phi, s.T, s.R};
    });
    return out;
}

Spectrum phase_average(const LoopSystem& sys, CouplingIndex w, double delta_min,
                       double delta_max, int n, int n_phase) {
    if (n_phase < 8) throw invalid_parameter("phase_average: need n_phase >= 8");
    if (std::abs(sys.xi(w)) == 0.0)
        throw invalid_parameter("phase_average: coupling modulus is zero, phase undefined");
    if (n < 2) throw invalid_parameter("phase_average: need at least 2 grid points");
    if (!(delta_min < delta_max))
        throw invalid_parameter("phase_average: delta_min must be below delta_max");

    Spectrum spec;
    spec.system = with_phase(sys, w, 0.0);
    spec.delta_min = delta_min;
    spec.delta_max = delta_max;
    spec.points.resize(n);

    const double step = (delta_max - delta_min) / double(n - 1);
    // Parallel over the detuning grid; the phase loop stays in fixed order per
    // point so the accumulation is identical in serial and parallel mode.
    for_each_index(n, [&](int i) {
        const double d = delta_min + step * i;
        SpectrumPoint acc{d, 0.0, 0.0, 0.0, 0.0, AVERAGED_PHI_SENTINEL};
        for (int k = 0; k < n_phase; ++k) {
            const double phi = 2.0 * M_PI * k / double(n_phase);
            LoopSystem local = with_phase(sys, w, phi);
            local.set_detuning(d);
            const SteadyState s = solve_steady_state(local);
            acc.T += s.T;
            acc.R += s.R;
            acc.occupancy_a1 += s.occupancy_a1;
            acc.occupancy_b1 += s.occupancy_b1;
        }
        const double inv = 1.0 / double(n_phase);
        acc.T *= inv;
        acc.R *= inv;
        acc.occupancy_a1 *= inv;
        acc.occupancy_b1 *= inv;
        spec.points[i] = acc;
    });
    return spec;
}

namespace {

// Minima of y with prominence measured against the lower of the two flanking
// ridges (walk outward until a value below the minimum or the edge).
struct RawExtremum {
    int index;
    double prominence;
};

std::vector<RawExtremum> minima_with_prominence(const std::vector<double>& y,
                                                double threshold) {
    std::vector<RawExtremum> out;
    const int n = int(y.size());
    for (int i = 1; i + 1 < n; ++i) {
        if (!(y[i] < y[i - 1] && y[i] < y[i + 1])) continue;
        double left_ridge = y[i];
        for (int k = i - 1; k >= 0; --k) {
            if (y[k] < y[i]) break;
            left_ridge = std::max(left_ridge, y[k]);
        }
        double right_ridge = y[i];
        for (int k = i + 1; k < n; ++k) {
            if (y[k] < y[i]) break;
            right_ridge = std::max(right_ridge, y[k]);
        }
        const double prom = std::min(left_ridge, right_ridge) - y[i];
        if (prom > threshold) out.push_back({i, prom});
    }
    return out;
}

} // namespace

std::vector<ResonanceFeature> find_extrema(const std::vector<double>& x,
                                           const std::vector<double>& y, double prominence,
                                           Channel channel) {
    if (x.size() != y.size()) throw invalid_parameter("find_extrema: size mismatch");
    if (x.size() < 5) throw invalid_parameter("find_extrema: need at least 5 points");
    if (!(prominence > 0.0)) throw invalid_parameter("find_extrema: prominence must be > 0");

    std::vector<ResonanceFeature> features;
    for (int pass = 0; pass < 2; ++pass) {
        const bool dips = (pass == 0);
        std::vector<double> v = y;
        if (!dips)
            for (double& t : v) t = -t;

        for (const RawExtremum& e : minima_with_prominence(v, prominence)) {
            const int i = e.index;
            ResonanceFeature f;
            f.kind = dips ? FeatureKind::dip : FeatureKind::peak;
            f.channel = channel;
            f.prominence = e.prominence;

            // 3-point parabolic vertex; falls back to the grid point when flat.
            const double den = v[i - 1] - 2.0 * v[i] + v[i + 1];
            double offset = 0.0;
            if (std::abs(den) > 1e-300) offset = 0.5 * (v[i - 1] - v[i + 1]) / den;
            offset = std::clamp(offset, -0.5, 0.5);
            const double h = x[i + 1] - x[i];
            f.location = x[i] + offset * h;
            const double vmin = v[i] - 0.25 * (v[i - 1] - v[i + 1]) * offset;
            f.value = dips ? vmin : -vmin;

            // Full width at half prominence, linear interpolation at crossings.
            const double level = v[i] + 0.5 * e.prominence;
            double xl = x.front(), xr = x.back();
            for (int k = i - 1; k >= 0; --k) {
                if (v[k] >= level) {
                    const double t = (level - v[k]) / (v[k + 1] - v[k]);
                    xl = x[k] + t * (x[k + 1] - x[k]);
                    break;
                }
            }
            for (int k = i + 1; k < int(v.size()); ++k) {
                if (v[k] >= level) {
                    const double t = (level - v[k - 1]) / (v[k] - v[k - 1]);
                    xr = x[k - 1] + t * (x[k] - x[k - 1]);
                    break;
                }
            }
            f.width = std::max(xr - xl, h);
            features.push_back(f);
        }
    }
    std::sort(features.begin(), features.end(),
              [](const ResonanceFeature& a, const ResonanceFeature& b) {
                  return a.location < b.location;
              });
    return features;
}

std::vector<ResonanceFeature> find_resonances(const Spectrum& spec, double prominence) {
    std::vector<double> x, t, r;
    x.reserve(spec.size());
    t.reserve(spec.size());
    r.reserve(spec.size());
    for (const SpectrumPoint& p : spec.points) {
        x.push_back(p.delta);
        t.push_back(p.T);
        r.push_back(p.R);
    }
    std::vector<ResonanceFeature> out = find_extrema(x, t, prominence, Channel::T);
    std::vector<ResonanceFeature> rr = find_extrema(x, r, prominence, Channel::R);
    out.insert(out.end(), rr.begin(), rr.end());
    std::sort(out.begin(), out.end(), [](const ResonanceFeature& a, const ResonanceFeature& b) {
        return a.location < b.location;
    });
    return out;
}

} // namespace loopres
