#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace boolvol {

/// 0 selects std::thread::hardware_concurrency().
unsigned resolve_threads(unsigned requested) noexcept;

/// Calls body(i) for i in [0, count) on up to `threads` workers. Work is
/// handed out in fixed-size blocks; callers write results by index so the
/// outcome does not depend on scheduling. The first exception is rethrown.
template <class Body>
void parallel_for(std::uint64_t count, unsigned threads, Body&& body) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  constexpr std::uint64_t kBlock = 256;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      while (true) {
        std::uint64_t begin = next.fetch_add(kBlock);
        if (begin >= count) return;
        std::uint64_t end = std::min(count, begin + kBlock);
        for (std::uint64_t i = begin; i < end; ++i) body(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  auto n = static_cast<unsigned>(std::min<std::uint64_t>(threads, (count + kBlock - 1) / kBlock));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace boolvol
