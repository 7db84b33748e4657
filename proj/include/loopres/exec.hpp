#pragma once

namespace loopres {

// Process-wide execution mode. Parallel kernels write each result into its own
// slot with a static schedule, so both modes produce bit-identical output; the
// serial mode exists as the reproducibility reference and for benchmarking.
enum class ExecMode { serial, parallel };

void set_exec_mode(ExecMode mode);
ExecMode exec_mode();
bool parallel_enabled();

} // namespace loopres
