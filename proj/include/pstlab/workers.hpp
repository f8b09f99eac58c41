#pragma once

// Minimal worker pool: maps a function over a vector with a fixed number of
// threads. Results land at the index of their input, so the output never
// depends on scheduling.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pstlab {

/// PSTLAB_WORKERS if set, otherwise the hardware concurrency (at least 1).
inline unsigned default_workers() {
  if (const char* env = std::getenv("PSTLAB_WORKERS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw std::invalid_argument(std::string("PSTLAB_WORKERS must be a positive integer, got ") + env);
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <typename In, typename F>
auto parallel_map(const std::vector<In>& items, F&& f, unsigned workers) {
  using Out = decltype(f(items.front()));
  if (workers == 0) throw std::invalid_argument("parallel_map: worker count must be positive");
  std::vector<Out> out(items.size());
  if (workers == 1 || items.size() < 2) {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = f(items[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < items.size();) {
      try {
        out[i] = f(items[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = items.size();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, items.size()));
  for (unsigned w = 0; w < count; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace pstlab
