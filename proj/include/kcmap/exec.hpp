#pragma once

namespace kcmap {

/// Selects the serial reference path or the OpenMP path for the
/// per-publication kernels. Both produce identical output: parallel workers
/// write to preallocated slots indexed by record position, so results never
/// depend on thread count or scheduling.
enum class ExecMode { Serial, Parallel };

int hardware_threads();

/// Caps the number of OpenMP threads used by Parallel kernels. 0 keeps the
/// runtime default.
void set_thread_limit(int n);
int thread_limit();

} // namespace kcmap
