#pragma once

#include <cstddef>
#include <functional>

namespace mvr {

std::size_t resolve_thread_count(std::size_t requested) noexcept;

// Runs fn(begin, end) over [0, n) split into contiguous chunks, one per
// worker. threads == 0 means hardware concurrency. If workers throw, the
// exception from the lowest chunk is rethrown.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace mvr
