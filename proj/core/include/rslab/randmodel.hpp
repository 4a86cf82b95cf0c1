#pragma once

// Random list-recovery instances and the closed-form predictors around them:
// E[X], Markov, the e^{1/p} second-moment bound, the exact second moment from
// the weight distribution, Paley-Zygmund, the agreement union bound, Chernoff.
//
// X is the number of codewords of RS[q,d] contained in A_1 x ... x A_q when
// every (position, element) pair is kept independently with probability p.
// All predictors are evaluated in log-space in long double and clipped where
// they are probabilities.

#include <cstdint>
#include <variant>

#include "rslab/gf.hpp"
#include "rslab/recovery.hpp"

namespace rslab::randmodel {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

/// (master, trial index) -> an independent, reproducible stream.
struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t index = 0;

  SplitMix64 stream() const { return SplitMix64(mix64(master ^ mix64(index))); }
};

inline constexpr std::uint64_t kDefaultSeed = 0xA5EED;

struct Iid {
  double p;
};
struct FixedSize {
  std::uint32_t t;
};
using SampleModel = std::variant<Iid, FixedSize>;

/// Lists for the first n canonical positions. Iid: membership bits drawn
/// position-major, element-minor. FixedSize: partial Fisher-Yates over the
/// canonical element order.
recovery::Instance sample_instance(const gf::Field& field, std::size_t n, const SampleModel& model,
                                   SeedSpec seed);

long double log_expected_count(std::uint64_t q, int d, double p);
/// E[X] = q^{d+1} p^q.
double expected_count(std::uint64_t q, int d, double p);

/// min(1, E[X]).
double markov_upper(std::uint64_t q, int d, double p);

/// E[X] + e^{1/p} E[X]^2. Throws ZeroProbability for p = 0.
long double log_second_moment_upper(std::uint64_t q, int d, double p);
double second_moment_upper(std::uint64_t q, int d, double p);

/// True when the exact second moment below is evaluated (not too many digits).
bool second_moment_exact_available(std::uint64_t q, int d);
/// E[X^2] = q^{d+1} sum_t W_t p^{q+t}, W the exact weight distribution.
long double log_second_moment_exact(std::uint64_t q, int d, double p);
double second_moment_exact(std::uint64_t q, int d, double p);

/// E[X]^2 / E[X^2], exact denominator when available, else the upper bound.
double pz_lower(std::uint64_t q, int d, double p);

/// sum_{a' >= a} C(q, a') q^{d+1} p^{a'}, clipped to 1.
long double log_agreement_tail(std::uint64_t q, int d, double p, std::uint32_t a);
double agreement_tail(std::uint64_t q, int d, double p, std::uint32_t a);

/// exp(-eps^2 mu / 2) with mu = n p; 1 when mu = 0.
double chernoff_tail(std::uint64_t n, double p, double eps);

}  // namespace rslab::randmodel
