// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace dls {

// Global worker count for the element/face/row loops. All reductions in the
// library are chunked with a fixed chunk size and combined in chunk order, so
// results are bitwise independent of this setting.
inline int& thread_count() {
  static int n = 1;
  return n;
}

inline void set_thread_count(int n) { thread_count() = std::max(1, n); }

// Runs fn(i) for i in [begin, end). Work is handed out in fixed-size blocks;
// fn must only write to state owned by index i.
template <typename F>
void parallel_for(std::size_t begin, std::size_t end, F&& fn) {
  const std::size_t n = end > begin ? end - begin : 0;
  const int workers = thread_count();
  if (workers <= 1 || n < 128) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const std::size_t block = 256;
  std::atomic<std::size_t> next{begin};
  auto run = [&]() {
    for (;;) {
      std::size_t b = next.fetch_add(block);
      if (b >= end) return;
      std::size_t e = std::min(end, b + block);
      for (std::size_t i = b; i < e; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

// Deterministic reduction: partial sums over fixed 4096-element chunks are
// computed (possibly concurrently) and then combined serially in chunk order.
// The result does not depend on the thread count.
template <typename T, typename F>
T chunked_sum(std::size_t n, F&& term) {
  constexpr std::size_t chunk = 4096;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<T> partial(nchunks, T{});
  parallel_for(0, nchunks, [&](std::size_t c) {
    T s{};
    const std::size_t b = c * chunk, e = std::min(n, b + chunk);
    for (std::size_t i = b; i < e; ++i) s += term(i);
    partial[c] = s;
  });
  T total{};
  for (const T& p : partial) total += p;
  return total;
}

}  // namespace dls
