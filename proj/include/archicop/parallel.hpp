#pragma once

// Row loop shared by the kernels that come in a serial and an OpenMP variant.
// Each index writes only its own output slot, so both variants produce the
// same bits; reductions are done afterwards in index order by the caller.

#include <cstddef>
#include <exception>
#include <limits>

#include "archicop/matrix.hpp"

namespace archicop {

/// Calls f(i) for i in [0, n). The first exception in index order is rethrown
/// after the loop, whichever thread raised it.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& f) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr first;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(archicop_for_each_index)
      {
        if (static_cast<std::size_t>(i) < first_index) {
          first_index = static_cast<std::size_t>(i);
          first = std::current_exception();
        }
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

/// Number of OpenMP threads the parallel variants will use.
int worker_threads();

}  // namespace archicop
