#pragma once

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#include <omp.h>

namespace fracheat {

/// Evaluates f(0..count-1) on the OpenMP pool. Results land at their index, so
/// any later reduction over them is independent of scheduling. The first
/// exception thrown by f is rethrown on the calling thread.
template <class F>
auto parallel_map(std::size_t count, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(count);
  std::exception_ptr error;
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(fracheat_parallel_map_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// Serial counterpart of parallel_map; used as the reference in tests.
template <class F>
auto serial_map(std::size_t count, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  std::vector<std::invoke_result_t<F&, std::size_t>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(f(i));
  return out;
}

/// Sets the OpenMP pool size; 0 keeps the current setting.
inline void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace fracheat
