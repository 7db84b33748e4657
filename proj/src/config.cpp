#include "loopres/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "loopres/cmt.hpp"

namespace loopres {

int SystemBlock::xi_slot(int i, int j) {
    if (i > j) std::swap(i, j);
    if (i < 1 || j > 3) throw invalid_parameter("xi index out of range");
    static constexpr int slot[3][3] = {{0, 1, 2}, {-1, 3, 4}, {-1, -1, 5}};
    return slot[i - 1][j - 1];
}

LoopSystem SystemBlock::build() const {
    LoopSystem sys;
    sys.gamma = gamma;
    sys.delta = delta;
    sys.a_in = a_in.value();
    for (int i = 1; i <= 3; ++i)
        for (int j = i; j <= 3; ++j) sys.set_xi(i, j, xi_at(i, j).value());
    sys.kappa = kappa_critical ? critical_kappa(sys.xi(1, 1), sys.gamma[0]) : kappa;
    sys.validate();
    return sys;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

using Section = std::map<std::string, Entry>;

struct RawConfig {
    std::map<std::string, Section> sections; // "" is the top level
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw config_error("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw config_error("empty section name", line_no);
            raw.sections[section]; // a section may be empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error("expected `key = value`", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("empty key", line_no);
        if (value.empty()) throw config_error("missing value for key '" + key + "'", line_no);
        auto& sec = raw.sections[section];
        if (sec.count(key)) throw config_error("duplicate key '" + key + "'", line_no);
        sec[key] = {value, line_no, false};
    }
    return raw;
}

double parse_number(const Entry& e, const std::string& key) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(e.value, &pos);
    } catch (...) {
        throw config_error("malformed number for '" + key + "'", e.line);
    }
    if (trim(e.value.substr(pos)).size())
        throw config_error("trailing characters after number for '" + key + "'", e.line);
    return v;
}

int parse_int(const Entry& e, const std::string& key) {
    const double v = parse_number(e, key);
    if (v != std::floor(v)) throw config_error("'" + key + "' must be an integer", e.line);
    return int(v);
}

bool parse_bool(const Entry& e, const std::string& key) {
    std::string v = e.value;
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw config_error("'" + key + "' must be a boolean", e.line);
}

std::vector<double> parse_list(const Entry& e, const std::string& key) {
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        bool ok = !item.empty();
        if (ok) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                ok = trim(item.substr(pos)).empty();
            } catch (...) {
                ok = false;
            }
        }
        if (!ok) throw config_error("malformed number in list '" + key + "'", e.line);
    }
    if (out.empty()) throw config_error("empty list for '" + key + "'", e.line);
    return out;
}

// `modulus, phase` with the phase in units of pi.
ComplexEntry parse_complex(const Entry& e, const std::string& key) {
    const std::vector<double> v = parse_list(e, key);
    if (v.size() != 2)
        throw config_error("'" + key + "' expects `modulus, phase` (phase in pi units)",
                           e.line);
    return ComplexEntry{v[0], v[1]};
}

CouplingIndex parse_pair(const Entry& e, const std::string& key) {
    const std::string v = trim(e.value);
    if (v.size() != 2 || v[0] < '1' || v[0] > '3' || v[1] < '1' || v[1] > '3')
        throw config_error("'" + key + "' must be a two-digit pair like 12 or 22", e.line);
    return CouplingIndex{v[0] - '0', v[1] - '0'};
}

const Entry* find(const Section* sec, const std::string& key) {
    if (!sec) return nullptr;
    const auto it = sec->find(key);
    if (it == sec->end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

void check_all_used(const RawConfig& raw) {
    for (const auto& [name, sec] : raw.sections)
        for (const auto& [key, entry] : sec)
            if (!entry.used)
                throw config_error("unknown key '" + key + "' in section [" +
                                       (name.empty() ? "top level" : name) + "]",
                                   entry.line);
}

const Section* section(const RawConfig& raw, const std::string& name) {
    const auto it = raw.sections.find(name);
    return it == raw.sections.end() ? nullptr : &it->second;
}

const std::set<std::string> known_sections = {
    "", "system", "sweep", "phase", "average", "taylor", "particle", "slab", "fdtd"};

const std::set<std::string> known_commands = {
    "spectrum", "phase-sweep",    "average",    "eigen",    "periodicity",
    "taylor",   "sense-particle", "sense-slab", "fdtd-run", "fdtd-sweep"};

} // namespace

RunConfig parse_config(const std::string& text) {
    const RawConfig raw = tokenize(text);
    for (const auto& [name, sec] : raw.sections)
        if (!known_sections.count(name)) {
            const int line = sec.empty() ? 0 : sec.begin()->second.line;
            throw config_error("unknown section [" + name + "]", line);
        }

    RunConfig cfg;

    const Entry* cmd = find(section(raw, ""), "command");
    if (!cmd) throw config_error("missing command");
    cfg.command = trim(cmd->value);
    if (!known_commands.count(cfg.command))
        throw config_error("unknown command '" + cfg.command + "'", cmd->line);

    if (const Section* sys = section(raw, "system")) {
        cfg.has_system = true;
        if (const Entry* e = find(sys, "gamma")) {
            const auto v = parse_list(*e, "gamma");
            if (v.size() == 1)
                cfg.system.gamma = {v[0], v[0], v[0]};
            else if (v.size() == 3)
                cfg.system.gamma = {v[0], v[1], v[2]};
            else
                throw config_error("'gamma' expects 1 or 3 values", e->line);
        }
        if (const Entry* e = find(sys, "delta")) {
            const auto v = parse_list(*e, "delta");
            if (v.size() == 1)
                cfg.system.delta = {v[0], v[0], v[0]};
            else if (v.size() == 3)
                cfg.system.delta = {v[0], v[1], v[2]};
            else
                throw config_error("'delta' expects 1 or 3 values", e->line);
        }
        if (const Entry* e = find(sys, "a_in")) cfg.system.a_in = parse_complex(*e, "a_in");
        for (int i = 1; i <= 3; ++i)
            for (int j = i; j <= 3; ++j) {
                const std::string key = "xi" + std::to_string(i) + std::to_string(j);
                if (const Entry* e = find(sys, key))
                    cfg.system.xi_at(i, j) = parse_complex(*e, key);
            }
        if (const Entry* e = find(sys, "kappa")) {
            if (trim(e->value) == "critical") {
                cfg.system.kappa_critical = true;
            } else {
                cfg.system.kappa_critical = false;
                cfg.system.kappa = parse_number(*e, "kappa");
                if (!(cfg.system.kappa > 0.0))
                    throw config_error("'kappa' must be positive", e->line);
            }
        }
    }

    if (const Section* sw = section(raw, "sweep")) {
        cfg.has_sweep = true;
        if (const Entry* e = find(sw, "delta_min")) cfg.sweep.delta_min = parse_number(*e, "delta_min");
        if (const Entry* e = find(sw, "delta_max")) cfg.sweep.delta_max = parse_number(*e, "delta_max");
        if (const Entry* e = find(sw, "points")) cfg.sweep.points = parse_int(*e, "points");
        if (cfg.sweep.points < 2) throw config_error("'points' must be at least 2");
        if (!(cfg.sweep.delta_min < cfg.sweep.delta_max))
            throw config_error("sweep bounds must satisfy delta_min < delta_max");
    }

    if (const Section* ph = section(raw, "phase")) {
        cfg.has_phase = true;
        if (const Entry* e = find(ph, "which")) cfg.phase.which = parse_pair(*e, "which");
        if (const Entry* e = find(ph, "samples")) cfg.phase.samples = parse_int(*e, "samples");
        if (const Entry* e = find(ph, "delta")) cfg.phase.delta = parse_number(*e, "delta");
    }

    if (const Section* av = section(raw, "average")) {
        cfg.has_average = true;
        if (const Entry* e = find(av, "which")) cfg.average.which = parse_pair(*e, "which");
        if (const Entry* e = find(av, "samples")) cfg.average.samples = parse_int(*e, "samples");
    }

    if (const Section* ty = section(raw, "taylor")) {
        cfg.has_taylor = true;
        if (const Entry* e = find(ty, "x")) cfg.taylor.x = parse_number(*e, "x");
        if (cfg.taylor.x < 0.0) throw config_error("taylor x must be >= 0");
    }

    if (const Section* pa = section(raw, "particle")) {
        cfg.has_particle = true;
        if (const Entry* e = find(pa, "resonator")) cfg.particle.resonator = parse_int(*e, "resonator");
        if (const Entry* e = find(pa, "theta_deg")) cfg.particle.theta_deg = parse_number(*e, "theta_deg");
        if (const Entry* e = find(pa, "theta_ref_deg"))
            cfg.particle.theta_ref_deg = parse_number(*e, "theta_ref_deg");
        if (const Entry* e = find(pa, "m")) cfg.particle.m = parse_int(*e, "m");
        if (const Entry* e = find(pa, "delta_eps")) cfg.particle.delta_eps = parse_number(*e, "delta_eps");
        if (const Entry* e = find(pa, "s0")) cfg.particle.s0 = parse_number(*e, "s0");
        if (const Entry* e = find(pa, "compose")) cfg.particle.compose = parse_bool(*e, "compose");
        if (const Entry* e = find(pa, "prominence")) cfg.particle.prominence = parse_number(*e, "prominence");
    }

    if (const Section* sl = section(raw, "slab")) {
        cfg.has_slab = true;
        if (const Entry* e = find(sl, "pair")) cfg.slab.pair = parse_pair(*e, "pair");
        if (const Entry* e = find(sl, "xi_background"))
            cfg.slab.xi_background = parse_complex(*e, "xi_background");
        if (const Entry* e = find(sl, "xi_slab")) cfg.slab.xi_slab = parse_complex(*e, "xi_slab");
        if (const Entry* e = find(sl, "eps_slab0")) cfg.slab.eps_slab0 = parse_number(*e, "eps_slab0");
        if (const Entry* e = find(sl, "eps_surround"))
            cfg.slab.eps_surround = parse_number(*e, "eps_surround");
        if (const Entry* e = find(sl, "eps_slab")) cfg.slab.eps_slab = parse_number(*e, "eps_slab");
        if (const Entry* e = find(sl, "prominence")) cfg.slab.prominence = parse_number(*e, "prominence");
        if (cfg.slab.eps_slab0 == cfg.slab.eps_surround)
            throw config_error("slab eps_slab0 must differ from eps_surround");
    }

    if (const Section* fd = section(raw, "fdtd")) {
        cfg.has_fdtd = true;
        if (const Entry* e = find(fd, "cell_nm")) cfg.fdtd.cell_nm = parse_number(*e, "cell_nm");
        if (const Entry* e = find(fd, "lambda_nm")) cfg.fdtd.lambda_nm = parse_number(*e, "lambda_nm");
        if (const Entry* e = find(fd, "lambda_list")) cfg.fdtd.lambda_list = parse_list(*e, "lambda_list");
        const Entry* lmin = find(fd, "lambda_min");
        const Entry* lmax = find(fd, "lambda_max");
        const Entry* lpts = find(fd, "lambda_points");
        if (lmin || lmax || lpts) {
            if (!(lmin && lmax && lpts))
                throw config_error("lambda_min/lambda_max/lambda_points must appear together");
            if (!cfg.fdtd.lambda_list.empty())
                throw config_error("give either lambda_list or lambda_min/max/points");
            const double a = parse_number(*lmin, "lambda_min");
            const double b = parse_number(*lmax, "lambda_max");
            const int n = parse_int(*lpts, "lambda_points");
            if (n < 2 || !(a < b)) throw config_error("bad lambda range");
            for (int k = 0; k < n; ++k)
                cfg.fdtd.lambda_list.push_back(a + (b - a) * k / double(n - 1));
        }
        if (const Entry* e = find(fd, "max_cycles")) cfg.fdtd.max_cycles = parse_number(*e, "max_cycles");
        if (const Entry* e = find(fd, "window_cycles"))
            cfg.fdtd.window_cycles = parse_number(*e, "window_cycles");
        if (const Entry* e = find(fd, "rel_tol")) cfg.fdtd.rel_tol = parse_number(*e, "rel_tol");
        if (const Entry* e = find(fd, "rings")) cfg.fdtd.rings = parse_bool(*e, "rings");
        if (const Entry* e = find(fd, "particle_theta_deg"))
            cfg.fdtd.particle_theta_deg = parse_number(*e, "particle_theta_deg");
        if (const Entry* e = find(fd, "particle_eps"))
            cfg.fdtd.particle_eps = parse_number(*e, "particle_eps");
        if (const Entry* e = find(fd, "slab_eps")) cfg.fdtd.slab_eps = parse_number(*e, "slab_eps");
        if (const Entry* e = find(fd, "margin_nm")) cfg.fdtd.margin_nm = parse_number(*e, "margin_nm");
        if (const Entry* e = find(fd, "pml_cells")) cfg.fdtd.pml_cells = parse_int(*e, "pml_cells");
        if (const Entry* e = find(fd, "snapshot")) cfg.fdtd.snapshot = parse_bool(*e, "snapshot");
        if (!(cfg.fdtd.cell_nm > 0.0)) throw config_error("cell_nm must be positive");
        if (!(cfg.fdtd.lambda_nm > 0.0)) throw config_error("lambda_nm must be positive");
    }

    check_all_used(raw);

    // Per-command block requirements.
    const auto need = [&](bool have, const char* what) {
        if (!have)
            throw config_error("command '" + cfg.command + "' needs a [" + what + "] block");
    };
    const std::string& c = cfg.command;
    if (c == "spectrum") {
        need(cfg.has_system, "system");
        need(cfg.has_sweep, "sweep");
    } else if (c == "phase-sweep") {
        need(cfg.has_system, "system");
        need(cfg.has_phase, "phase");
    } else if (c == "average") {
        need(cfg.has_system, "system");
        need(cfg.has_sweep, "sweep");
        need(cfg.has_average, "average");
    } else if (c == "eigen") {
        need(cfg.has_system, "system");
    } else if (c == "periodicity") {
        need(cfg.has_system, "system");
        need(cfg.has_phase, "phase");
    } else if (c == "taylor") {
        need(cfg.has_system, "system");
        need(cfg.has_sweep, "sweep");
        need(cfg.has_taylor, "taylor");
    } else if (c == "sense-particle") {
        need(cfg.has_system, "system");
        need(cfg.has_sweep, "sweep");
        need(cfg.has_particle, "particle");
    } else if (c == "sense-slab") {
        need(cfg.has_system, "system");
        need(cfg.has_sweep, "sweep");
        need(cfg.has_slab, "slab");
    } else if (c == "fdtd-run") {
        need(cfg.has_fdtd, "fdtd");
    } else if (c == "fdtd-sweep") {
        need(cfg.has_fdtd, "fdtd");
        if (cfg.fdtd.lambda_list.empty())
            throw config_error("fdtd-sweep needs lambda_list or lambda_min/max/points");
    }
    if (cfg.has_system) cfg.system.build(); // validates gamma, kappa
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

std::string fmt_complex(const ComplexEntry& v) {
    return fmt(v.modulus) + ", " + fmt(v.phase_pi);
}

std::string fmt_pair(CouplingIndex w) {
    return std::to_string(w.i) + std::to_string(w.j);
}

} // namespace

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "command = " << c.command << "\n";
    if (c.has_system) {
        out << "\n[system]\n";
        out << "gamma = " << fmt(c.system.gamma[0]) << ", " << fmt(c.system.gamma[1]) << ", "
            << fmt(c.system.gamma[2]) << "\n";
        out << "delta = " << fmt(c.system.delta[0]) << ", " << fmt(c.system.delta[1]) << ", "
            << fmt(c.system.delta[2]) << "\n";
        out << "a_in = " << fmt_complex(c.system.a_in) << "\n";
        for (int i = 1; i <= 3; ++i)
            for (int j = i; j <= 3; ++j)
                out << "xi" << i << j << " = " << fmt_complex(c.system.xi_at(i, j)) << "\n";
        if (c.system.kappa_critical)
            out << "kappa = critical\n";
        else
            out << "kappa = " << fmt(c.system.kappa) << "\n";
    }
    if (c.has_sweep) {
        out << "\n[sweep]\n";
        out << "delta_min = " << fmt(c.sweep.delta_min) << "\n";
        out << "delta_max = " << fmt(c.sweep.delta_max) << "\n";
        out << "points = " << c.sweep.points << "\n";
    }
    if (c.has_phase) {
        out << "\n[phase]\n";
        out << "which = " << fmt_pair(c.phase.which) << "\n";
        out << "samples = " << c.phase.samples << "\n";
        out << "delta = " << fmt(c.phase.delta) << "\n";
    }
    if (c.has_average) {
        out << "\n[average]\n";
        out << "which = " << fmt_pair(c.average.which) << "\n";
        out << "samples = " << c.average.samples << "\n";
    }
    if (c.has_taylor) {
        out << "\n[taylor]\n";
        out << "x = " << fmt(c.taylor.x) << "\n";
    }
    if (c.has_particle) {
        out << "\n[particle]\n";
        out << "resonator = " << c.particle.resonator << "\n";
        out << "theta_deg = " << fmt(c.particle.theta_deg) << "\n";
        if (c.particle.theta_ref_deg)
            out << "theta_ref_deg = " << fmt(*c.particle.theta_ref_deg) << "\n";
        out << "m = " << c.particle.m << "\n";
        out << "delta_eps = " << fmt(c.particle.delta_eps) << "\n";
        out << "s0 = " << fmt(c.particle.s0) << "\n";
        out << "compose = " << (c.particle.compose ? "true" : "false") << "\n";
        out << "prominence = " << fmt(c.particle.prominence) << "\n";
    }
    if (c.has_slab) {
        out << "\n[slab]\n";
        out << "pair = " << fmt_pair(c.slab.pair) << "\n";
        out << "xi_background = " << fmt_complex(c.slab.xi_background) << "\n";
        out << "xi_slab = " << fmt_complex(c.slab.xi_slab) << "\n";
        out << "eps_slab0 = " << fmt(c.slab.eps_slab0) << "\n";
        out << "eps_surround = " << fmt(c.slab.eps_surround) << "\n";
        out << "eps_slab = " << fmt(c.slab.eps_slab) << "\n";
        out << "prominence = " << fmt(c.slab.prominence) << "\n";
    }
    if (c.has_fdtd) {
        out << "\n[fdtd]\n";
        out << "cell_nm = " << fmt(c.fdtd.cell_nm) << "\n";
        out << "lambda_nm = " << fmt(c.fdtd.lambda_nm) << "\n";
        if (!c.fdtd.lambda_list.empty()) {
            out << "lambda_list = ";
            for (std::size_t k = 0; k < c.fdtd.lambda_list.size(); ++k)
                out << (k ? ", " : "") << fmt(c.fdtd.lambda_list[k]);
            out << "\n";
        }
        out << "max_cycles = " << fmt(c.fdtd.max_cycles) << "\n";
        out << "window_cycles = " << fmt(c.fdtd.window_cycles) << "\n";
        out << "rel_tol = " << fmt(c.fdtd.rel_tol) << "\n";
        out << "rings = " << (c.fdtd.rings ? "true" : "false") << "\n";
        if (c.fdtd.particle_theta_deg)
            out << "particle_theta_deg = " << fmt(*c.fdtd.particle_theta_deg) << "\n";
        out << "particle_eps = " << fmt(c.fdtd.particle_eps) << "\n";
        if (c.fdtd.slab_eps) out << "slab_eps = " << fmt(*c.fdtd.slab_eps) << "\n";
        out << "margin_nm = " << fmt(c.fdtd.margin_nm) << "\n";
        out << "pml_cells = " << c.fdtd.pml_cells << "\n";
        out << "snapshot = " << (c.fdtd.snapshot ? "true" : "false") << "\n";
    }
    return out.str();
}

} // namespace loopres
