#pragma once

#include <cstddef>
#include <functional>

namespace mimic {

// MIMIC_THREADS when set to a positive integer, otherwise the hardware
// concurrency (at least 1).
unsigned default_thread_count();

// Runs task(i) for i in [0, count) on up to `threads` workers. Tasks must
// write only to their own slot; the first exception thrown is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace mimic
