#pragma once

#include <cstddef>
#include <functional>

namespace marcink {

// Process-wide default worker count; 0 means hardware_concurrency.
// Overridable via the MARCINK_THREADS environment variable and the CLI.
void set_default_threads(int n);
int default_threads();

// Static-partition parallel loop. Results must be written to per-index
// slots so the outcome is independent of the worker count.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn,
                  int threads = 0);

}  // namespace marcink
