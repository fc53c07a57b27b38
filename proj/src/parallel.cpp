#include "parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sic {

void parallel_for(long long n, int jobs, const std::function<void(long long)>& body) {
  if (n <= 0) return;
  if (jobs > n) jobs = (int)n;
  if (jobs <= 1) {
    for (long long i = 0; i < n; i++) body(i);
    return;
  }
  std::atomic<long long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr err;
  std::mutex err_mtx;

  auto worker = [&] {
    constexpr long long chunk = 8;
    while (!failed.load(std::memory_order_relaxed)) {
      const long long base = next.fetch_add(chunk);
      if (base >= n) return;
      const long long end = base + chunk < n ? base + chunk : n;
      for (long long i = base; i < end; i++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mtx);
          if (!err) err = std::current_exception();
          failed.store(true);
          return;
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int j = 0; j < jobs; j++) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

} // namespace sic
