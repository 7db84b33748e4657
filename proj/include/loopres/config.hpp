#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "loopres/system.hpp"

namespace loopres {

// Plain-text run configuration: `key = value` lines grouped into [sections],
// `#` comments, one command per file. Complex entries are `modulus, phase`
// pairs with the modulus in units of gamma and the phase in units of pi.
// Values are kept verbatim as numbers so serialize/parse round-trips exactly.

struct ComplexEntry {
    double modulus = 0.0;
    double phase_pi = 0.0; // units of pi

    cplx value() const { return std::polar(modulus, phase_pi * M_PI); }
    bool operator==(const ComplexEntry&) const = default;
};

struct SystemBlock {
    std::array<double, 3> gamma{1.0, 1.0, 1.0};
    std::array<double, 3> delta{0.0, 0.0, 0.0};
    ComplexEntry a_in{1.0, 0.0};
    // Upper-triangle order: 11, 12, 13, 22, 23, 33.
    std::array<ComplexEntry, 6> xi{};
    bool kappa_critical = true;
    double kappa = 0.0; // used when kappa_critical is false

    static int xi_slot(int i, int j);
    ComplexEntry& xi_at(int i, int j) { return xi[xi_slot(i, j)]; }
    const ComplexEntry& xi_at(int i, int j) const { return xi[xi_slot(i, j)]; }

    /// Builds the LoopSystem; kappa_critical derives kappa from |xi11|.
    LoopSystem build() const;

    bool operator==(const SystemBlock&) const = default;
};

struct SweepBlock {
    double delta_min = -100.0;
    double delta_max = 100.0;
    int points = 2001;
    bool operator==(const SweepBlock&) const = default;
};

struct PhaseBlock {
    CouplingIndex which{1, 2};
    int samples = 256;
    double delta = 0.0;
    bool operator==(const PhaseBlock&) const = default;
};

struct AverageBlock {
    CouplingIndex which{1, 2};
    int samples = 256;
    bool operator==(const AverageBlock&) const = default;
};

struct TaylorBlock {
    double x = 3.0; // |xi23|/gamma of the reconstruction
    bool operator==(const TaylorBlock&) const = default;
};

struct ParticleBlock {
    int resonator = 2;
    double theta_deg = 0.0;
    std::optional<double> theta_ref_deg; // absent: baseline is the bare system
    int m = 52;
    double delta_eps = 1.0;
    double s0 = 20.0;
    bool compose = false;
    double prominence = 0.02;
    bool operator==(const ParticleBlock&) const = default;
};

struct SlabBlock {
    CouplingIndex pair{2, 3};
    ComplexEntry xi_background{};
    ComplexEntry xi_slab{};
    double eps_slab0 = 4.0;
    double eps_surround = 1.0;
    double eps_slab = 4.1;
    double prominence = 0.02;
    bool operator==(const SlabBlock&) const = default;
};

struct FdtdBlock {
    double cell_nm = 30.0;
    double lambda_nm = 571.8;
    std::vector<double> lambda_list; // fdtd-sweep; explicit or from min/max/points
    double max_cycles = 2000.0;
    double window_cycles = 20.0;
    double rel_tol = 0.005;
    bool rings = true;
    std::optional<double> particle_theta_deg;
    double particle_eps = 4.0;
    std::optional<double> slab_eps;
    double margin_nm = 1500.0;
    int pml_cells = 10;
    bool snapshot = false;
    bool operator==(const FdtdBlock&) const = default;
};

struct RunConfig {
    std::string command;

    bool has_system = false;
    bool has_sweep = false;
    bool has_phase = false;
    bool has_average = false;
    bool has_taylor = false;
    bool has_particle = false;
    bool has_slab = false;
    bool has_fdtd = false;

    SystemBlock system;
    SweepBlock sweep;
    PhaseBlock phase;
    AverageBlock average;
    TaylorBlock taylor;
    ParticleBlock particle;
    SlabBlock slab;
    FdtdBlock fdtd;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; throws config_error with a 1-based line number.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

struct RunOptions {
    std::string output_dir = ".";
    bool quiet = false;
};

/// Dispatches the configured command and writes its CSV outputs.
/// Returns 0 on success, 4 when an FDTD result failed to converge.
/// Config problems and numerical failures surface as exceptions.
int run(const RunConfig& config, const RunOptions& options);

} // namespace loopres
