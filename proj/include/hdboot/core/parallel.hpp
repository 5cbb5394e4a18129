#pragma once

#include <cstddef>
#include <functional>

namespace hdboot {

/// Worker count: HDBOOT_THREADS if set and positive, else hardware concurrency.
[[nodiscard]] std::size_t thread_count();

/// Overrides HDBOOT_THREADS for this process; 0 restores the default.
void set_thread_count(std::size_t threads);

/**
 * Calls body(i) for every i in [0, count) across thread_count() workers.
 *
 * Indices are handed out dynamically; body must only write to
 * index-owned state. The first exception thrown by any body is rethrown.
 */
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace hdboot
