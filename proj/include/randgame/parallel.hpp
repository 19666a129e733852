#pragma once

#include <cstddef>
#include <type_traits>
#include <vector>

#include <omp.h>

namespace randgame {

// How a batch of independent trials is executed. threads == 0 means "use the
// OpenMP default"; threads == 1 runs the serial reference loop.
struct Execution {
  int threads = 0;

  static Execution serial() { return {1}; }
  bool is_serial() const { return threads == 1; }
};

// Serial reference: results[i] = fn(i) in index order.
template <class Fn>
auto map_trials_serial(std::size_t count, Fn&& fn) {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<Result> results(count);
  for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
  return results;
}

// OpenMP kernel. Each trial writes only its own slot, so the output is
// identical to map_trials_serial for any thread count as long as fn(i) is a
// pure function of i.
template <class Fn>
auto map_trials_parallel(std::size_t count, Fn&& fn, int threads = 0) {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<Result> results(count);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
  for (long long i = 0; i < n; ++i) {
    results[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  }
  return results;
}

template <class Fn>
auto map_trials(std::size_t count, Fn&& fn, Execution exec = {}) {
  if (exec.is_serial()) return map_trials_serial(count, std::forward<Fn>(fn));
  return map_trials_parallel(count, std::forward<Fn>(fn), exec.threads);
}

}  // namespace randgame
