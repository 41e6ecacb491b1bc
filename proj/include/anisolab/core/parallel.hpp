#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

#include "anisolab/core/rng.hpp"
#include "anisolab/core/types.hpp"

namespace anisolab {

/// Sampling budget shared by every Monte Carlo estimator.
///
/// Results depend only on (samples, seed, chunks); `threads` changes wall
/// time and nothing else.
struct McConfig {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  int chunks = 32;
  int threads = 1;
};

/// Default worker count: ANISOLAB_THREADS if set, else 1.
int default_threads();

/// Number of samples assigned to chunk `c` when `total` is split into `chunks`.
std::size_t chunk_size(std::size_t total, int chunks, int c);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Pairwise reduction in fixed index order.
double pairwise_sum(std::span<const double> values);

struct ChunkTotal {
  double sum = 0.0;
  std::size_t count = 0;
};

/// Batch-means estimate over per-chunk totals.
Estimate batch_means(std::span<const ChunkTotal> chunks, std::uint64_t seed);

/// Run `fn(chunk)` for every chunk on up to `threads` workers; results are
/// returned in chunk order regardless of scheduling.
template <class Fn>
auto run_chunks(int chunks, int threads, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, int>> {
  using R = std::invoke_result_t<Fn&, int>;
  std::vector<R> out(static_cast<std::size_t>(chunks));
  if (threads <= 1 || chunks <= 1) {
    for (int c = 0; c < chunks; ++c) out[c] = fn(c);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      try {
        out[c] = fn(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int workers = threads < chunks ? threads : chunks;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Monte Carlo mean of a per-sample quantity.
///
/// `batch(rng, count)` must draw `count` fresh samples from `rng` and return
/// the sum of their values. Chunk c always uses stream (seed, purpose, c), so
/// the result is independent of `mc.threads`.
template <class Batch>
Estimate mc_mean(const McConfig& mc, std::uint64_t purpose, Batch&& batch) {
  constexpr std::size_t kSlice = 1024;
  auto totals = run_chunks(mc.chunks, mc.threads, [&](int c) {
    Philox rng(mc.seed, stream_id(purpose, static_cast<std::uint64_t>(c)));
    const std::size_t count = chunk_size(mc.samples, mc.chunks, c);
    CompensatedSum sum;
    for (std::size_t done = 0; done < count; done += kSlice) {
      const std::size_t m = count - done < kSlice ? count - done : kSlice;
      sum.add(batch(rng, m));
    }
    return ChunkTotal{sum.value(), count};
  });
  return batch_means(totals, mc.seed);
}

}  // namespace anisolab
