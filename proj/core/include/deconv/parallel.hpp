#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace deconv {

/// Runs fn(i) for i in [0, count). Results must be written by index into
/// caller-owned storage, so the outcome is identical for any thread count;
/// replicate i derives its RNG from sub-stream i, never from the worker.
inline void parallel_replicates(std::size_t count, int threads,
                                const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  auto nw = static_cast<std::size_t>(threads);
  if (nw > count) nw = count;
  pool.reserve(nw);
  for (std::size_t t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace deconv
