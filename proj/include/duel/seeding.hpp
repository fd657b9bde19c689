#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

namespace duel {

// splitmix64 finalizer over (master, stream). Pure function, so any worker
// can recreate the stream for a given index.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Samples are grouped into fixed-size blocks, each driven by its own derived
// stream. Results depend only on (seed, block index), never on threading.
inline constexpr std::size_t kSamplesPerBlock = 4096;

// Runs fn(block_index, first, count) for every block of `total` items and
// returns the per-block results in block order.
template <typename BlockFn>
auto run_blocks(std::size_t total, std::size_t block_size, unsigned threads, BlockFn&& fn) {
  using Result = decltype(fn(std::size_t{}, std::size_t{}, std::size_t{}));
  const std::size_t blocks = (total + block_size - 1) / block_size;
  std::vector<Result> results(blocks);
  auto run_one = [&](std::size_t b) {
    const std::size_t first = b * block_size;
    results[b] = fn(b, first, std::min(block_size, total - first));
  };
  const unsigned workers = std::min<std::size_t>(std::max(threads, 1u), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_one(b);
    return results;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < blocks; b = next++) run_one(b);
      });
    }
  }
  return results;
}

}  // namespace duel
