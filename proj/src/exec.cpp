#include "loopres/exec.hpp"

#include <atomic>

namespace loopres {

namespace {
std::atomic<ExecMode> g_mode{ExecMode::parallel};
}

void set_exec_mode(ExecMode mode) { g_mode.store(mode); }
ExecMode exec_mode() { return g_mode.load(); }
bool parallel_enabled() { return g_mode.load() == ExecMode::parallel; }

} // namespace loopres
