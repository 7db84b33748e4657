#include "loopres/fdtd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "loopres/exec.hpp"

namespace loopres {
namespace fdtd {

void FdtdScene::validate() const {
    if (eps.nx <= 0 || eps.ny <= 0 || eps.eps.size() != std::size_t(eps.nx) * eps.ny)
        throw geometry_error("scene: empty or inconsistent permittivity map");
    for (double e : eps.eps)
        if (!(e >= 1.0)) throw geometry_error("scene: relative permittivity below 1");
    const int p = pml.cells;
    if (2 * p + 4 > eps.nx || 2 * p + 4 > eps.ny)
        throw geometry_error("scene: grid too small for the PML");
    const auto interior = [&](int i, int j) {
        return i >= p && i < eps.nx - p && j >= p && j < eps.ny - p;
    };
    if (!interior(source.i, source.j))
        throw geometry_error("scene: source not inside the non-PML interior");
    if (!interior(probe.i, probe.j0) || !interior(probe.i, probe.j1) || probe.j0 > probe.j1)
        throw geometry_error("scene: flux probe not inside the non-PML interior");
    if (!(source.wavelength > 0.0)) throw geometry_error("scene: wavelength must be positive");
}

namespace {

// Graded PML conductivity at fractional depth (in cells) into the layer.
double sigma_profile(double depth_cells, const PmlSpec& pml, double cell) {
    if (depth_cells <= 0.0) return 0.0;
    const double d_phys = pml.cells * cell;
    const double sigma_max =
        (pml.order + 1.0) * (-std::log(pml.target_reflection)) / (2.0 * d_phys);
    const double u = std::min(depth_cells / pml.cells, 1.0);
    return sigma_max * std::pow(u, pml.order);
}

// Depth into the x (or y) PML at fractional grid position pos (in cells).
double pml_depth(double pos, int n_cells, int pml_cells) {
    const double left = pml_cells - pos;
    const double right = pos - (n_cells - pml_cells);
    return std::max({left, right, 0.0});
}

} // namespace

FdtdSolver::FdtdSolver(const FdtdScene& scene) : scene_(scene) {
    scene_.validate();
    nx_ = scene_.eps.nx;
    ny_ = scene_.eps.ny;
    const double cell = scene_.eps.cell;
    dt_ = scene_.run.courant * cell / std::sqrt(2.0);

    const std::size_t n_cells = std::size_t(nx_) * ny_;
    hz_.assign(n_cells, 0.0);
    hzx_.assign(n_cells, 0.0);
    hzy_.assign(n_cells, 0.0);
    ex_.assign(std::size_t(nx_) * (ny_ + 1), 0.0);
    ey_.assign(std::size_t(nx_ + 1) * ny_, 0.0);

    ca_ex_.assign(ex_.size(), 0.0);
    cb_ex_.assign(ex_.size(), 0.0);
    ca_ey_.assign(ey_.size(), 0.0);
    cb_ey_.assign(ey_.size(), 0.0);
    da_x_.assign(n_cells, 0.0);
    db_x_.assign(n_cells, 0.0);
    da_y_.assign(n_cells, 0.0);
    db_y_.assign(n_cells, 0.0);

    const auto eps_cell = [&](int i, int j) {
        i = std::clamp(i, 0, nx_ - 1);
        j = std::clamp(j, 0, ny_ - 1);
        return scene_.eps.at(i, j);
    };

    // Ex lives at (i + 1/2, j): damped by the y-PML, eps averaged across the edge.
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j <= ny_; ++j) {
            const double eps = 0.5 * (eps_cell(i, j - 1) + eps_cell(i, j));
            const double sig = sigma_profile(pml_depth(double(j), ny_, scene_.pml.cells),
                                             scene_.pml, cell) /
                               eps;
            const double den = 1.0 + 0.5 * sig * dt_;
            ca_ex_[std::size_t(i) * (ny_ + 1) + j] = (1.0 - 0.5 * sig * dt_) / den;
            cb_ex_[std::size_t(i) * (ny_ + 1) + j] = (dt_ / (eps * cell)) / den;
        }

    // Ey lives at (i, j + 1/2): damped by the x-PML.
    for (int i = 0; i <= nx_; ++i)
        for (int j = 0; j < ny_; ++j) {
            const double eps = 0.5 * (eps_cell(i - 1, j) + eps_cell(i, j));
            const double sig = sigma_profile(pml_depth(double(i), nx_, scene_.pml.cells),
                                             scene_.pml, cell) /
                               eps;
            const double den = 1.0 + 0.5 * sig * dt_;
            ca_ey_[std::size_t(i) * ny_ + j] = (1.0 - 0.5 * sig * dt_) / den;
            cb_ey_[std::size_t(i) * ny_ + j] = (dt_ / (eps * cell)) / den;
        }

    // Split Hz at (i + 1/2, j + 1/2): Hzx damped by the x profile, Hzy by y.
    // Dividing the magnetic conductivity by the local eps matches the E-side
    // damping rate, so the layer stays reflectionless where the waveguide
    // enters it.
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) {
            const double eps = eps_cell(i, j);
            const std::size_t id = std::size_t(i) * ny_ + j;
            const double sx = sigma_profile(pml_depth(i + 0.5, nx_, scene_.pml.cells),
                                            scene_.pml, cell) /
                              eps;
            const double sy = sigma_profile(pml_depth(j + 0.5, ny_, scene_.pml.cells),
                                            scene_.pml, cell) /
                              eps;
            const double dxn = 1.0 + 0.5 * sx * dt_;
            const double dyn = 1.0 + 0.5 * sy * dt_;
            da_x_[id] = (1.0 - 0.5 * sx * dt_) / dxn;
            db_x_[id] = (dt_ / cell) / dxn;
            da_y_[id] = (1.0 - 0.5 * sy * dt_) / dyn;
            db_y_[id] = (dt_ / cell) / dyn;
        }
}

void FdtdSolver::update_e_omp() {
    const int nx = nx_, ny = ny_;
    const double* hz = hz_.data();
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (int i = 0; i < nx; ++i) {
        double* ex = ex_.data() + std::size_t(i) * (ny + 1);
        const double* ca = ca_ex_.data() + std::size_t(i) * (ny + 1);
        const double* cb = cb_ex_.data() + std::size_t(i) * (ny + 1);
        const double* hzi = hz + std::size_t(i) * ny;
        for (int j = 1; j < ny; ++j)
            ex[j] = ca[j] * ex[j] + cb[j] * (hzi[j] - hzi[j - 1]);
    }
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (int i = 1; i < nx; ++i) {
        double* ey = ey_.data() + std::size_t(i) * ny;
        const double* ca = ca_ey_.data() + std::size_t(i) * ny;
        const double* cb = cb_ey_.data() + std::size_t(i) * ny;
        const double* hzi = hz + std::size_t(i) * ny;
        const double* hzm = hz + std::size_t(i - 1) * ny;
        for (int j = 0; j < ny; ++j)
            ey[j] = ca[j] * ey[j] - cb[j] * (hzi[j] - hzm[j]);
    }
}

void FdtdSolver::update_h_omp() {
    const int nx = nx_, ny = ny_;
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (int i = 0; i < nx; ++i) {
        const std::size_t row = std::size_t(i) * ny;
        double* hzx = hzx_.data() + row;
        double* hzy = hzy_.data() + row;
        double* hz = hz_.data() + row;
        const double* dax = da_x_.data() + row;
        const double* dbx = db_x_.data() + row;
        const double* day = da_y_.data() + row;
        const double* dby = db_y_.data() + row;
        const double* ex = ex_.data() + std::size_t(i) * (ny + 1);
        const double* eyi = ey_.data() + std::size_t(i) * ny;
        const double* eyp = ey_.data() + std::size_t(i + 1) * ny;
        for (int j = 0; j < ny; ++j) {
            hzx[j] = dax[j] * hzx[j] - dbx[j] * (eyp[j] - eyi[j]);
            hzy[j] = day[j] * hzy[j] + dby[j] * (ex[j + 1] - ex[j]);
            hz[j] = hzx[j] + hzy[j];
        }
    }
}

void FdtdSolver::update_e_plain() {
    for (int i = 0; i < nx_; ++i)
        for (int j = 1; j < ny_; ++j) {
            const std::size_t id = std::size_t(i) * (ny_ + 1) + j;
            ex_[id] = ca_ex_[id] * ex_[id] +
                      cb_ex_[id] * (hz_[std::size_t(i) * ny_ + j] -
                                    hz_[std::size_t(i) * ny_ + j - 1]);
        }
    for (int i = 1; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) {
            const std::size_t id = std::size_t(i) * ny_ + j;
            ey_[id] = ca_ey_[id] * ey_[id] -
                      cb_ey_[id] * (hz_[id] - hz_[std::size_t(i - 1) * ny_ + j]);
        }
}

void FdtdSolver::update_h_plain() {
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) {
            const std::size_t id = std::size_t(i) * ny_ + j;
            hzx_[id] = da_x_[id] * hzx_[id] -
                       db_x_[id] * (ey_[std::size_t(i + 1) * ny_ + j] - ey_[id]);
            hzy_[id] = da_y_[id] * hzy_[id] +
                       db_y_[id] * (ex_[std::size_t(i) * (ny_ + 1) + j + 1] -
                                    ex_[std::size_t(i) * (ny_ + 1) + j]);
            hz_[id] = hzx_[id] + hzy_[id];
        }
}

void FdtdSolver::inject_source() {
    // Hz sits at half-integer time levels; the source follows the same clock.
    const double t = (step_count_ + 0.5) * dt_;
    const SourceSpec& s = scene_.source;
    const double ramp_t = s.ramp_cycles * s.wavelength;
    double ramp = 1.0;
    if (t < ramp_t) ramp = 0.5 * (1.0 - std::cos(M_PI * t / ramp_t));
    const double v = s.amplitude * ramp * std::sin(2.0 * M_PI * t / s.wavelength);
    const std::size_t id = std::size_t(s.i) * ny_ + s.j;
    hzx_[id] += v;
    hz_[id] += v;
}

void FdtdSolver::step() {
    update_e_omp();
    update_h_omp();
    inject_source();
    ++step_count_;
}

void FdtdSolver::step_reference() {
    update_e_plain();
    update_h_plain();
    inject_source();
    ++step_count_;
}

double FdtdSolver::probe_flux() const {
    // S_x = Ey Hz, with Hz averaged onto the Ey column.
    const FluxProbeSpec& p = scene_.probe;
    double sum = 0.0;
    for (int j = p.j0; j <= p.j1; ++j) {
        const double ey = ey_[std::size_t(p.i) * ny_ + j];
        const double hz = 0.5 * (hz_[std::size_t(p.i - 1) * ny_ + j] +
                                 hz_[std::size_t(p.i) * ny_ + j]);
        sum += ey * hz;
    }
    return sum * scene_.eps.cell;
}

double FdtdSolver::field_energy() const {
    double e = 0.0;
    for (double v : ex_) e += v * v;
    for (double v : ey_) e += v * v;
    for (double v : hz_) e += v * v;
    return e;
}

double FdtdSolver::max_abs_hz() const {
    double m = 0.0;
    for (double v : hz_) m = std::max(m, std::abs(v));
    return m;
}

void FdtdSolver::dump_snapshot(const std::string& path) const {
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw std::runtime_error("snapshot: cannot open " + path);
    bin.write(reinterpret_cast<const char*>(hz_.data()),
              std::streamsize(hz_.size() * sizeof(double)));
    std::ofstream txt(path + ".txt");
    txt << "field=Hz\n"
        << "nx=" << nx_ << "\n"
        << "ny=" << ny_ << "\n"
        << "cell_nm=" << scene_.eps.cell << "\n"
        << "time_nm=" << time() << "\n"
        << "layout=row-major (i*ny+j), float64\n";
}

} // namespace fdtd
} // namespace loopres
