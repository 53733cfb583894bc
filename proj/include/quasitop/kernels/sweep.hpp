/// Index-keyed map over independent sample points.
///
/// Both paths write result i into slot i; any reduction afterwards walks the
/// slots in index order, so the parallel result is bit-identical to serial.
#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace quasitop {

enum class Exec { Serial, Parallel };

template <class F>
auto map_serial(std::size_t n, F&& f) {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

template <class F>
auto map_parallel(std::size_t n, F&& f) {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out(n);
  std::exception_ptr err;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(quasitop_sweep_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

template <class F>
auto map_indexed(Exec exec, std::size_t n, F&& f) {
  return exec == Exec::Parallel ? map_parallel(n, f) : map_serial(n, f);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace quasitop
