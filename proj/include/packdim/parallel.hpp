#pragma once

#include <cstddef>
#include <functional>

namespace packdim {

// 0 means hardware concurrency.
void set_thread_count(unsigned n) noexcept;
unsigned thread_count() noexcept;

// Runs body(i) for i in [0, n). Work is split into contiguous chunks, so
// results written per index do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace packdim
