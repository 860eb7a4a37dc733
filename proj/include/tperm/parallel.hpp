#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "tperm/error.hpp"

namespace tperm {

/// Sum in a fixed binary tree that depends only on the length of `values`.
/// Same input order gives the same bits no matter who produced the values.
inline Complex pairwise_sum(std::span<const Complex> values) {
  if (values.size() <= 8) {
    Complex acc{0.0, 0.0};
    for (const Complex& v : values) acc += v;
    return acc;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

/// 0 means "use every hardware thread".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(chunk, begin, end) for each fixed-size chunk of [0, count).
///
/// Chunk boundaries depend only on `count` and `chunk_size`, never on the
/// thread count, so callers that write one partial result per chunk and
/// reduce them in chunk order get thread-count-independent results.
template <class Body>
void for_each_chunk(std::size_t count, std::size_t chunk_size, unsigned threads,
                    Body&& body) {
  if (count == 0) return;
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(resolve_threads(threads), chunks));

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(count, begin + chunk_size);
    body(c, begin, end);
  };

  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t c = next.fetch_add(1);
          if (c >= chunks) return;
          try {
            run_chunk(c);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(chunks);
            return;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tperm
