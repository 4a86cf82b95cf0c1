#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rslab::stats {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials`.
Interval wilson(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

/// Mean and unbiased variance accumulated in insertion order.
class RunningMean {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  double stderr_of_mean() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Pool-adjacent-violators fit: the nondecreasing sequence closest to `values`
/// in weighted least squares.
std::vector<double> isotonic_fit(std::span<const double> values, std::span<const double> weights);

/// Binomial standard error sqrt(f(1-f)/n).
double binomial_stderr(double f, std::uint64_t n);

}  // namespace rslab::stats
