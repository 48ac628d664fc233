#include "latlab/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace latlab {

void parallel_for_chunks(std::size_t n_chunks, int threads,
                         const std::function<void(std::size_t)>& fn) {
  if (n_chunks == 0) return;
  const std::size_t workers =
      threads <= 1 ? 1 : std::min<std::size_t>(threads, n_chunks);
  if (workers == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      try {
        fn(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace latlab
