#pragma once

#include <optional>
#include <vector>

#include "loopres/errors.hpp"

namespace loopres {
namespace fdtd {

struct Ring {
    double cx = 0.0, cy = 0.0; // nm
    double r_outer = 3500.0;
    double r_inner = 3350.0;
    double eps = 4.0;
};

/// Horizontal strip spanning the full domain width (through the PML, so the
/// guided mode is absorbed instead of reflected).
struct Waveguide {
    double center_y = 0.0;
    double width = 150.0;
    double eps = 4.0;
};

struct Disk {
    double cx = 0.0, cy = 0.0;
    double radius = 90.0;
    double eps = 4.0;
};

/// Rectangle of extents (len_x, len_y) rotated by angle about its center.
struct Rect {
    double cx = 0.0, cy = 0.0;
    double len_x = 60.0;
    double len_y = 1500.0;
    double angle = 0.0; // radians
    double eps = 4.0;
};

struct GeometrySpec {
    std::vector<Ring> rings;
    std::optional<Waveguide> waveguide;
    std::optional<Disk> particle;
    std::optional<Rect> slab;
};

struct Domain {
    double x0 = 0.0, y0 = 0.0; // lower-left corner, nm
    double x1 = 0.0, y1 = 0.0;
};

/// Cell-centered relative permittivity map; index (i, j) -> i * ny + j,
/// cell center at (x0 + (i + 1/2) cell, y0 + (j + 1/2) cell).
struct EpsMap {
    int nx = 0, ny = 0;
    double cell = 30.0;
    double x0 = 0.0, y0 = 0.0;
    std::vector<double> eps;

    double at(int i, int j) const { return eps[std::size_t(i) * ny + j]; }
    double cx(int i) const { return x0 + (i + 0.5) * cell; }
    double cy(int j) const { return y0 + (j + 0.5) * cell; }
};

/// Center-point membership rasterization, background eps = 1. Later shapes
/// override earlier ones in the order waveguide, rings, slab, particle.
/// The cell size must divide the domain extents cleanly.
EpsMap rasterize(const GeometrySpec& spec, const Domain& domain, double cell);

/// The three-ring loop probed by a bottom waveguide: ring 1 bottom-center
/// above the guide, rings 2 (top-left) and 3 (top-right) with all inter-ring
/// gaps equal. Optional particle disk on ring 2 and slab between rings 2, 3.
struct LoopSceneParams {
    double cell = 30.0;
    double ring_outer = 3500.0;
    double ring_inner = 3350.0;
    double eps_ring = 4.0;
    double wg_width = 150.0;
    double wg_gap = 120.0; // waveguide to ring 1
    double eps_wg = 4.0;
    double ring_gap = 200.0; // surface-to-surface between rings
    bool include_rings = true;

    std::optional<double> particle_theta_deg; // angle on ring 2, ccw from +x
    double particle_radius = 90.0;
    double particle_gap = 90.0; // ring surface to particle surface
    double particle_eps = 4.0;

    std::optional<double> slab_eps;
    double slab_width = 60.0;   // across the ring 2-3 gap
    double slab_length = 1500.0;

    double margin = 1500.0; // geometry to PML inner face
    int pml_cells = 10;
};

struct LoopScene {
    GeometrySpec geometry;
    Domain domain;
    double cell = 30.0;
    int pml_cells = 10;
    double wg_center_y = 0.0;
    double source_x = 0.0; // 2 um right of the left PML inner face
    double probe_x = 0.0;  // downstream of the rings, left of the right PML
    double probe_halfwidth = 450.0;
};

LoopScene build_loop_scene(const LoopSceneParams& p);

/// Same scene with rings, particle, and slab removed (normalization reference).
LoopScene strip_resonators(const LoopScene& scene);

} // namespace fdtd
} // namespace loopres
