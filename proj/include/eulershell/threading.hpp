// Deterministic static-partition parallel for. Thread count comes from the
// EULER_SHELL_THREADS environment variable (default 1); results are written
// to preallocated per-index slots so the output is identical for any count.
#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace eulershell {

inline std::size_t thread_count() {
  const char* env = std::getenv("EULER_SHELL_THREADS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v <= 0) return 1;
  const std::size_t hc = std::thread::hardware_concurrency();
  return std::min<std::size_t>(static_cast<std::size_t>(v), hc ? 4 * hc : 64);
}

template <typename F>
void parallel_for(std::size_t n, F&& body) {
  const std::size_t nt = std::min(thread_count(), n ? n : 1);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::vector<std::exception_ptr> errs(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += nt) body(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace eulershell
