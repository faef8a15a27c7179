#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace screenbie {

// Worker count used by parallel loops; 1 runs inline. Set once by the CLI.
inline int& default_jobs() {
  static int jobs = 1;
  return jobs;
}

// Calls f(i) for i in [0, n) on up to `jobs` threads, handing out indices
// one at a time. The first exception thrown by any worker is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& f, int jobs = default_jobs()) {
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex m;
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace screenbie
