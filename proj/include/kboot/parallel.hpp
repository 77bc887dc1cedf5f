#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace kboot {

// Worker count: KBOOT_THREADS if set (clamped to >= 1), otherwise the
// available hardware parallelism. This is the only environment variable
// the project reads.
int worker_count();

// Runs body(i) for i in [0, count) across `workers` threads, in
// contiguous chunks. Each index is visited exactly once, so code that
// writes results[i] and derives its randomness from i is deterministic
// at every worker count. The lowest-index exception wins when several
// workers throw.
template <typename Body>
void parallel_for(std::size_t count, const Body& body, int workers) {
  if (count == 0) return;
  if (workers < 1) workers = 1;
  const std::size_t w = std::min<std::size_t>(std::size_t(workers), count);
  if (w == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t chunk = (count + w - 1) / w;
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(begin + chunk, count);
    threads.emplace_back([&, t, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

template <typename Body>
void parallel_for(std::size_t count, const Body& body) {
  parallel_for(count, body, worker_count());
}

}  // namespace kboot
