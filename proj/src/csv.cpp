#include "loopres/csv.hpp"

#include <cstdio>
#include <fstream>

namespace loopres {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    return out;
}

} // namespace

void write_spectrum_csv(const Spectrum& spec, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "delta,T,R,occ_a1,occ_b1,phi_a\n";
    for (const SpectrumPoint& p : spec.points)
        out << format_full(p.delta) << ',' << format_full(p.T) << ',' << format_full(p.R)
            << ',' << format_full(p.occupancy_a1) << ',' << format_full(p.occupancy_b1)
            << ',' << format_full(p.phi_a) << '\n';
}

void write_phase_sweep_csv(const std::vector<PhasePoint>& points, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "phi,T,R\n";
    for (const PhasePoint& p : points)
        out << format_full(p.phi) << ',' << format_full(p.T) << ',' << format_full(p.R)
            << '\n';
}

void write_eigen_csv(const EigenReport& rep, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "index,re_lambda,im_lambda,energy,decay_rate\n";
    for (int k = 0; k < 6; ++k)
        out << k + 1 << ',' << format_full(rep.eigenvalues[k].real()) << ','
            << format_full(rep.eigenvalues[k].imag()) << ',' << format_full(rep.energies[k])
            << ',' << format_full(rep.decay_rates[k]) << '\n';
}

void write_periodicity_csv(const PeriodicityReport& rep, const std::string& curves_path,
                           const std::string& power_path) {
    std::ofstream curves = open_out(curves_path);
    curves << "phi,zeta_1,zeta_2,zeta_3,zeta_4,zeta_5,zeta_6\n";
    for (std::size_t k = 0; k < rep.phase.size(); ++k) {
        curves << format_full(rep.phase[k]);
        for (int c = 0; c < 6; ++c) curves << ',' << format_full(rep.curves[c][k]);
        curves << '\n';
    }
    std::ofstream power = open_out(power_path);
    power << "l,power\n";
    for (std::size_t l = 0; l < rep.power_total.size(); ++l)
        power << l << ',' << format_full(rep.power_total[l]) << '\n';
}

void write_expansion_csv(const ExpansionReport& rep, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "delta,re_c0,im_c0,re_c1,im_c1,re_c2,im_c2,T_expanded,T_full\n";
    for (std::size_t i = 0; i < rep.delta.size(); ++i)
        out << format_full(rep.delta[i]) << ',' << format_full(rep.c0[i].real()) << ','
            << format_full(rep.c0[i].imag()) << ',' << format_full(rep.c1[i].real()) << ','
            << format_full(rep.c1[i].imag()) << ',' << format_full(rep.c2[i].real()) << ','
            << format_full(rep.c2[i].imag()) << ',' << format_full(rep.T_expanded[i]) << ','
            << format_full(rep.T_full[i]) << '\n';
}

void write_shift_csv(const ShiftReport& rep, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "feature_kind,location_baseline,location_perturbed,shift,width\n";
    for (const FeatureShift& m : rep.matched)
        out << to_string(m.baseline.kind) << '_' << to_string(m.baseline.channel) << ','
            << format_full(m.baseline.location) << ',' << format_full(m.perturbed.location)
            << ',' << format_full(m.shift) << ',' << format_full(m.baseline.width) << '\n';
    for (const ResonanceFeature& f : rep.unmatched_baseline)
        out << to_string(f.kind) << '_' << to_string(f.channel) << ','
            << format_full(f.location) << ",,nan," << format_full(f.width) << '\n';
    for (const ResonanceFeature& f : rep.unmatched_perturbed)
        out << to_string(f.kind) << '_' << to_string(f.channel) << ",,"
            << format_full(f.location) << ",nan," << format_full(f.width) << '\n';
}

void write_flux_csv(const std::vector<fdtd::FluxResult>& results, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "lambda_nm,flux_raw,flux_normalized,converged\n";
    for (const fdtd::FluxResult& r : results) {
        if (!r.error.empty()) {
            out << format_full(r.wavelength) << ",nan,nan,0\n";
            continue;
        }
        out << format_full(r.wavelength) << ',' << format_full(r.flux_raw) << ','
            << format_full(r.flux_normalized) << ',' << (r.converged ? 1 : 0) << '\n';
    }
}

} // namespace loopres
