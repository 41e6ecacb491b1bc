#include "anisolab/core/parallel.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace anisolab {

int default_threads() {
  if (const char* env = std::getenv("ANISOLAB_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) return t;
    } catch (...) {
    }
  }
  return 1;
}

std::size_t chunk_size(std::size_t total, int chunks, int c) {
  const std::size_t base = total / static_cast<std::size_t>(chunks);
  const std::size_t extra = total % static_cast<std::size_t>(chunks);
  return base + (static_cast<std::size_t>(c) < extra ? 1 : 0);
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate batch_means(std::span<const ChunkTotal> chunks, std::uint64_t seed) {
  Estimate est;
  est.seed = seed;
  std::vector<double> sums;
  std::vector<double> means;
  std::size_t total = 0;
  for (const auto& c : chunks) {
    if (c.count == 0) continue;
    sums.push_back(c.sum);
    means.push_back(c.sum / static_cast<double>(c.count));
    total += c.count;
  }
  est.samples = total;
  if (total == 0) return est;
  est.value = pairwise_sum(sums) / static_cast<double>(total);
  const std::size_t k = means.size();
  if (k < 2) return est;
  const double mean_of_means = pairwise_sum(means) / static_cast<double>(k);
  double var = 0.0;
  for (double m : means) var += (m - mean_of_means) * (m - mean_of_means);
  var /= static_cast<double>(k - 1);
  est.std_error = std::sqrt(var / static_cast<double>(k));
  return est;
}

}  // namespace anisolab
