// loopres — transmission/reflection spectra, eigenvalue diagnostics, and 2D
// FDTD verification runs for the three-resonator loop probed by a fiber.
//
// Usage: loopres <command> <config-file> [--output DIR] [--threads N]
//                [--serial] [--quiet]
// Exit codes: 0 ok, 2 config error, 3 numerical error, 4 unconverged FDTD.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "loopres/config.hpp"
#include "loopres/errors.hpp"
#include "loopres/exec.hpp"

int main(int argc, char** argv) {
    CLI::App app{"coupled-microresonator loop spectra and FDTD verification"};

    std::string command;
    std::string config_path;
    loopres::RunOptions options;
    int threads = 0;
    bool serial = false;

    app.add_option("command", command, "one of: spectrum phase-sweep average eigen "
                                       "periodicity taylor sense-particle sense-slab "
                                       "fdtd-run fdtd-sweep")
        ->required();
    app.add_option("config", config_path, "configuration file")->required();
    app.add_option("--output", options.output_dir, "output directory (default .)");
    app.add_option("--threads", threads, "OpenMP thread count (0 = library default)");
    app.add_flag("--serial", serial, "serial mode (bit-exact reference path)");
    app.add_flag("--quiet", options.quiet, "suppress progress output");

    CLI11_PARSE(app, argc, argv);

    if (serial) {
        loopres::set_exec_mode(loopres::ExecMode::serial);
    } else if (threads > 0) {
#ifdef _OPENMP
        omp_set_num_threads(threads);
#endif
    }

    try {
        loopres::RunConfig cfg = loopres::parse_config_file(config_path);
        if (cfg.command != command) {
            std::cerr << "error: config declares command '" << cfg.command
                      << "' but '" << command << "' was requested\n";
            return 2;
        }
        return loopres::run(cfg, options);
    } catch (const loopres::config_error& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const loopres::invalid_parameter& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const loopres::geometry_error& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const loopres::numerical_error& e) {
        std::cerr << "error: numerical: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
