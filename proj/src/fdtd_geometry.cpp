#include "loopres/fdtd_geometry.hpp"

#include <cmath>

namespace loopres {
namespace fdtd {

namespace {

bool in_ring(const Ring& r, double x, double y) {
    const double d2 = (x - r.cx) * (x - r.cx) + (y - r.cy) * (y - r.cy);
    return d2 >= r.r_inner * r.r_inner && d2 <= r.r_outer * r.r_outer;
}

bool in_disk(const Disk& d, double x, double y) {
    const double d2 = (x - d.cx) * (x - d.cx) + (y - d.cy) * (y - d.cy);
    return d2 <= d.radius * d.radius;
}

bool in_rect(const Rect& r, double x, double y) {
    const double c = std::cos(-r.angle), s = std::sin(-r.angle);
    const double lx = c * (x - r.cx) - s * (y - r.cy);
    const double ly = s * (x - r.cx) + c * (y - r.cy);
    return std::abs(lx) <= 0.5 * r.len_x && std::abs(ly) <= 0.5 * r.len_y;
}

int cell_count(double extent, double cell, const char* axis) {
    const double n = extent / cell;
    const int ni = int(std::lround(n));
    if (ni < 1 || std::abs(n - ni) > 1e-9 * std::max(1.0, n))
        throw geometry_error(std::string("rasterize: cell size does not divide the ") +
                             axis + " extent cleanly");
    return ni;
}

} // namespace

EpsMap rasterize(const GeometrySpec& spec, const Domain& domain, double cell) {
    if (!(cell > 0.0)) throw geometry_error("rasterize: cell size must be positive");
    EpsMap map;
    map.cell = cell;
    map.x0 = domain.x0;
    map.y0 = domain.y0;
    map.nx = cell_count(domain.x1 - domain.x0, cell, "x");
    map.ny = cell_count(domain.y1 - domain.y0, cell, "y");
    map.eps.assign(std::size_t(map.nx) * map.ny, 1.0);

    for (int i = 0; i < map.nx; ++i) {
        const double x = map.cx(i);
        for (int j = 0; j < map.ny; ++j) {
            const double y = map.cy(j);
            double e = 1.0;
            if (spec.waveguide && std::abs(y - spec.waveguide->center_y) <=
                                      0.5 * spec.waveguide->width)
                e = spec.waveguide->eps;
            for (const Ring& r : spec.rings)
                if (in_ring(r, x, y)) e = r.eps;
            if (spec.slab && in_rect(*spec.slab, x, y)) e = spec.slab->eps;
            if (spec.particle && in_disk(*spec.particle, x, y)) e = spec.particle->eps;
            map.eps[std::size_t(i) * map.ny + j] = e;
        }
    }
    return map;
}

LoopScene build_loop_scene(const LoopSceneParams& p) {
    LoopScene scene;
    scene.cell = p.cell;
    scene.pml_cells = p.pml_cells;
    scene.wg_center_y = 0.0;

    const double r1y = 0.5 * p.wg_width + p.wg_gap + p.ring_outer; // ring 1 center
    const double side = 2.0 * p.ring_outer + p.ring_gap;           // triangle side
    const double top_y = r1y + side * std::sqrt(3.0) / 2.0;
    const Ring ring1{0.0, r1y, p.ring_outer, p.ring_inner, p.eps_ring};
    const Ring ring2{-0.5 * side, top_y, p.ring_outer, p.ring_inner, p.eps_ring};
    const Ring ring3{+0.5 * side, top_y, p.ring_outer, p.ring_inner, p.eps_ring};

    GeometrySpec& g = scene.geometry;
    g.waveguide = Waveguide{scene.wg_center_y, p.wg_width, p.eps_wg};
    if (p.include_rings) g.rings = {ring1, ring2, ring3};

    // Bounding box of everything the PML must stay clear of. The triangle
    // layout is used for the box even when the rings are stripped, so a
    // reference scene shares the exact grid of its full scene.
    double bx0 = -0.5 * side - p.ring_outer;
    double bx1 = +0.5 * side + p.ring_outer;
    double by0 = -0.5 * p.wg_width;
    double by1 = top_y + p.ring_outer;

    // The particle orbit pokes at most particle_gap + 2 radius beyond the ring
    // surface, well inside the margin, so the domain (and hence the grid) is
    // identical across particle positions and particle-free references.
    const double orbit = p.particle_gap + 2.0 * p.particle_radius;
    if (p.margin < orbit + 4.0 * p.cell)
        throw geometry_error("build_loop_scene: margin too small for the particle orbit");
    if (p.particle_theta_deg) {
        const double th = *p.particle_theta_deg * M_PI / 180.0;
        const double rc = p.ring_outer + p.particle_gap + p.particle_radius;
        Disk d;
        d.cx = ring2.cx + rc * std::cos(th);
        d.cy = ring2.cy + rc * std::sin(th);
        d.radius = p.particle_radius;
        d.eps = p.particle_eps;
        if (p.include_rings) g.particle = d;
    }
    if (p.slab_eps && p.include_rings) {
        Rect slab;
        slab.cx = 0.5 * (ring2.cx + ring3.cx);
        slab.cy = top_y;
        slab.len_x = p.slab_width;
        slab.len_y = p.slab_length;
        slab.angle = 0.0;
        slab.eps = *p.slab_eps;
        g.slab = slab;
    }

    const double pml_d = p.pml_cells * p.cell;
    const double x0 = bx0 - p.margin - pml_d;
    const double x1 = bx1 + p.margin + pml_d;
    const double y0 = by0 - p.margin - pml_d;
    const double y1 = by1 + p.margin + pml_d;
    const auto snap_up = [&](double extent) {
        return std::ceil(extent / p.cell - 1e-9) * p.cell;
    };
    scene.domain = {x0, y0, x0 + snap_up(x1 - x0), y0 + snap_up(y1 - y0)};

    scene.source_x = x0 + pml_d + 2000.0;
    scene.probe_x = bx1 + p.margin - 500.0;
    scene.probe_halfwidth = 450.0;

    if (scene.source_x >= bx0 && p.include_rings && scene.source_x > ring1.cx - p.ring_outer)
        throw geometry_error("build_loop_scene: source would sit under the coupled ring");
    return scene;
}

LoopScene strip_resonators(const LoopScene& scene) {
    LoopScene ref = scene;
    ref.geometry.rings.clear();
    ref.geometry.particle.reset();
    ref.geometry.slab.reset();
    return ref;
}

} // namespace fdtd
} // namespace loopres
