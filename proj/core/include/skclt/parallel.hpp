#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace skclt {

// Runs body(i) for i in [0, count) on up to `jobs` threads. Work is handed
// out by a shared counter; callers write results into slot i so the outcome
// never depends on scheduling. The first exception (lowest index wins) is
// rethrown after all workers stop.
inline void parallel_for(long count, int jobs, const std::function<void(long)>& body) {
  if (count <= 0) return;
  const long workers = std::clamp<long>(jobs, 1, count);
  if (workers == 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::mutex mutex;
  long next = 0;
  long failed_index = count;
  std::exception_ptr failure;
  auto worker = [&]() {
    for (;;) {
      long i;
      {
        std::lock_guard lock(mutex);
        if (next >= count || failure) return;
        i = next++;
      }
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (long w = 0; w < workers; ++w) threads.emplace_back(worker);
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace skclt
