#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ffenergy::detail {

/// Number of blocks an index range is cut into. Fixed so that block-ordered
/// floating-point reductions do not depend on the worker count.
inline constexpr std::size_t kBlocks = 64;

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Workers actually used by for_blocks(n, requested, ...).
inline unsigned effective_workers(std::size_t n, unsigned requested) {
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min({n, kBlocks, std::size_t{resolve_workers(requested)}})));
}

/// Calls body(block, begin, end, worker) for each of min(n, kBlocks)
/// contiguous blocks of [0, n). Blocks are handed out dynamically; worker is
/// in [0, workers). The first exception thrown by a body is rethrown.
template <class Body>
void for_blocks(std::size_t n, unsigned workers, Body&& body) {
  const std::size_t blocks = std::min(n, kBlocks);
  if (blocks == 0) return;
  auto range = [&](std::size_t b) {
    return std::pair{n * b / blocks, n * (b + 1) / blocks};
  };
  workers = effective_workers(n, workers);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      auto [lo, hi] = range(b);
      body(b, lo, hi, 0u);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
        try {
          auto [lo, hi] = range(b);
          body(b, lo, hi, w);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = blocks;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ffenergy::detail
