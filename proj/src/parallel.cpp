#include "sandtone/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sandtone {

namespace {
std::atomic<unsigned> g_thread_count{0};
}

void set_thread_count(unsigned count) { g_thread_count.store(count); }

unsigned thread_count() {
  unsigned n = g_thread_count.load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void parallel_for(int n, const std::function<void(int, int)>& body) {
  if (n <= 0) return;
  const int workers = static_cast<int>(std::min<unsigned>(thread_count(), static_cast<unsigned>(n)));
  if (workers <= 1) {
    body(0, n);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  pool.clear();  // joins
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sandtone
