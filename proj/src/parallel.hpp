#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace collfrag::detail {

// Runs body(begin, end) over contiguous chunks of [0, n). The chunking only
// decides which thread computes an index, never the order of any reduction.
template <class Body>
void parallel_for(std::size_t n, std::size_t workers, Body&& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = std::min(n, w * chunk);
    const std::size_t e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(std::size_t{0}, std::min(n, chunk));
}

// Sum of values[i] via fixed blocks of 64 summed left to right, then the
// block partials left to right. Independent of any thread layout.
inline double block_sum(const std::vector<double>& values) {
  constexpr std::size_t block = 64;
  double total = 0.0;
  for (std::size_t b = 0; b < values.size(); b += block) {
    double partial = 0.0;
    const std::size_t e = std::min(values.size(), b + block);
    for (std::size_t i = b; i < e; ++i) partial += values[i];
    total += partial;
  }
  return total;
}

}  // namespace collfrag::detail
