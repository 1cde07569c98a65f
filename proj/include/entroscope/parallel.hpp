#pragma once

#include <cstddef>
#include <functional>

namespace entroscope {

/// Number of worker threads used by the per-eigenket maps. Defaults to the
/// ENTROSCOPE_THREADS environment variable, else the hardware concurrency.
unsigned worker_threads();

/// Overrides the worker count; 0 restores the default.
void set_worker_threads(unsigned n);

/// Calls body(i) for every i in [0, count). Each index is visited exactly
/// once; the first exception thrown by any call is rethrown here.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace entroscope
