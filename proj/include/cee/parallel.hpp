#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cee {

/// Worker cap: min(hardware concurrency, CEE_THREADS if set). Values < 1 in
/// the env var fall back to 1.
inline size_t thread_cap() {
  static const size_t cap = [] {
    size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("CEE_THREADS")) {
      long v = std::strtol(env, nullptr, 10);
      if (v < 1) return size_t{1};
      if (static_cast<size_t>(v) < hw) return static_cast<size_t>(v);
    }
    return hw;
  }();
  return cap;
}

/// Runs fn(i) for i in [0, count). Results must be written to per-index
/// slots; callers reduce sequentially afterwards so output order never
/// depends on scheduling.
inline void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
  size_t workers = std::min(thread_cap(), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto body = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) break;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace cee
