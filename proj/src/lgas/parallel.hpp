#pragma once

#include <cstdint>
#include <exception>
#include <utility>

#ifdef LGAS_HAVE_OPENMP
#include <omp.h>
#endif

namespace lgas {

int default_threads();

// Serial reference loop. Kept alongside the OpenMP kernel so tests and the
// benchmark can compare them; results must match bit-for-bit.
template <typename Fn>
void serial_for(std::int64_t n, Fn&& fn) {
  for (std::int64_t i = 0; i < n; ++i) fn(i);
}

// Data-parallel loop over independent replicas. Every iteration derives its
// randomness from its own index, so the result is independent of the thread
// count and schedule. Exceptions are captured and rethrown once.
template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
#ifdef LGAS_HAVE_OPENMP
  if (threads <= 0) threads = default_threads();
  if (threads > 1 && n > 1) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#else
  (void)threads;
#endif
  serial_for(n, std::forward<Fn>(fn));
}

}  // namespace lgas
