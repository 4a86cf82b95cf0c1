#include "rslab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace rslab::stats {

Interval wilson(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

void RunningMean::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningMean::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

double RunningMean::stderr_of_mean() const {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

std::vector<double> isotonic_fit(std::span<const double> values, std::span<const double> weights) {
  struct Block {
    double sum;
    double weight;
    std::size_t size;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = i < weights.size() ? weights[i] : 1.0;
    blocks.push_back({values[i] * w, w, 1});
    while (blocks.size() > 1) {
      const Block& b = blocks.back();
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum / a.weight <= b.sum / b.weight) break;
      Block merged{a.sum + b.sum, a.weight + b.weight, a.size + b.size};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& b : blocks) out.insert(out.end(), b.size, b.sum / b.weight);
  return out;
}

double binomial_stderr(double f, std::uint64_t n) {
  return n > 0 ? std::sqrt(std::max(0.0, f * (1.0 - f)) / static_cast<double>(n)) : 0.0;
}

}  // namespace rslab::stats
