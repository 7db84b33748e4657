#pragma once

#include <map>
#include <string>
#include <vector>

#include "loopres/fdtd_geometry.hpp"

namespace loopres {
namespace fdtd {

struct PmlSpec {
    int cells = 10;
    double order = 3.0;              // polynomial grading
    double target_reflection = 1e-6; // normal-incidence design reflection
};

struct SourceSpec {
    int i = 0, j = 0;      // Hz cell
    double wavelength = 571.8; // nm
    double amplitude = 1.0;
    double ramp_cycles = 10.0; // raised-cosine turn-on
};

/// Vertical flux line at Ey column i, cells j0..j1 inclusive.
struct FluxProbeSpec {
    int i = 0;
    int j0 = 0, j1 = 0;
};

struct RunControl {
    double window_cycles = 20.0; // averaging window
    double rel_tol = 0.005;      // window-to-window convergence
    double max_cycles = 2000.0;
    double courant = 0.99; // dt = courant * cell / sqrt(2)
};

/// Fully-resolved simulation input: grid, permittivity, source, probe, PML.
struct FdtdScene {
    EpsMap eps;
    SourceSpec source;
    FluxProbeSpec probe;
    PmlSpec pml;
    RunControl run;

    void validate() const;
};

/// TM-set (Ex, Ey, Hz) Yee solver with Berenger split-field absorbing layers
/// on all four boundaries. Units: lengths in nm, c = 1 (time in nm), fields
/// impedance-normalized. step() runs the OpenMP kernels (honoring the global
/// exec mode); step_reference() is the plain serial implementation kept as a
/// bit-exactness reference, and both produce identical field histories.
class FdtdSolver {
  public:
    explicit FdtdSolver(const FdtdScene& scene);

    void step();
    void step_reference();

    double dt() const { return dt_; }
    double time() const { return step_count_ * dt_; }
    long step_count() const { return step_count_; }
    double steps_per_cycle() const { return scene_.source.wavelength / dt_; }

    /// Instantaneous S_x integrated over the probe line.
    double probe_flux() const;
    /// Unweighted quadratic field diagnostic (serial/parallel comparisons).
    double field_energy() const;
    double max_abs_hz() const;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    const std::vector<double>& hz() const { return hz_; }

    /// Raw row-major doubles of Hz plus a text sidecar (<path>.txt) with the
    /// grid dimensions, cell size, and sample time.
    void dump_snapshot(const std::string& path) const;

  private:
    void update_e_omp();
    void update_h_omp();
    void update_e_plain();
    void update_h_plain();
    void inject_source();

    FdtdScene scene_;
    int nx_ = 0, ny_ = 0;
    double dt_ = 0.0;
    long step_count_ = 0;

    // Field arrays: Hz split at cell centers, Ex on y-edges, Ey on x-edges.
    std::vector<double> hz_, hzx_, hzy_; // nx * ny
    std::vector<double> ex_;             // nx * (ny + 1)
    std::vector<double> ey_;             // (nx + 1) * ny

    // Update coefficients (semi-implicit loss terms).
    std::vector<double> ca_ex_, cb_ex_;
    std::vector<double> ca_ey_, cb_ey_;
    std::vector<double> da_x_, db_x_; // Hzx, per cell
    std::vector<double> da_y_, db_y_; // Hzy, per cell
};

struct FluxResult {
    double wavelength = 0.0;
    double flux_raw = 0.0;
    double flux_normalized = 0.0;
    bool converged = false;
    double last_ratio = 0.0; // window-to-window relative change at stop
    double cycles_run = 0.0;
    std::string error; // nonempty when the run failed hard
};

/// Builds the concrete grid scene (rasterized permittivity, snapped source
/// and probe) from a geometric loop scene at one excitation wavelength.
FdtdScene build_scene(const LoopScene& scene, double wavelength,
                      const RunControl& run = {}, const PmlSpec& pml = {});

/// Per-wavelength cache of reference (resonator-free) raw fluxes.
using ReferenceCache = std::map<double, double>;

/// Runs to the windowed steady state and normalizes against the stripped
/// reference scene (cached per wavelength when a cache is supplied).
FluxResult run_transmission(const LoopScene& scene, double wavelength,
                            const RunControl& run = {}, const PmlSpec& pml = {},
                            ReferenceCache* cache = nullptr);

/// Independent run per wavelength; per-wavelength failures are recorded in
/// the result's error field without aborting the sweep.
std::vector<FluxResult> sweep_wavelength(const LoopScene& scene,
                                         const std::vector<double>& wavelengths,
                                         const RunControl& run = {}, const PmlSpec& pml = {});

/// Raw windowed steady-state flux of one concrete scene (no normalization).
FluxResult run_raw_flux(const FdtdScene& scene);

} // namespace fdtd
} // namespace loopres
