#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace minext {

/// One row of an experiment: what the CSV emitter writes per trial.
struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t omega_size = 0;
  bool success = false;
  double objective = 0.0;
  double residual = 0.0;
  bool converged = true;
};

/// Evaluates f(0), ..., f(count-1) on up to `threads` workers and returns
/// the results in index order. f must derive all randomness from its index.
/// threads == 0 means hardware concurrency.
template <class F>
auto run_trials(std::size_t count, F&& f, unsigned threads = 0)
    -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();  // join
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace minext
