#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sfkit {

/// Worker count used by the library's parallel loops (default 1).
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n) across the configured workers. Each index is
/// visited exactly once; callers write results into per-index slots and
/// reduce them in index order, so output is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace sfkit
