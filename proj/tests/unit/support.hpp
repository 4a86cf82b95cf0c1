#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rslab/error.hpp"
#include "rslab/gf.hpp"
#include "rslab/recovery.hpp"

namespace rslab::testing {

#define EXPECT_RSLAB_ERROR(stmt, errc)                                       \
  do {                                                                       \
    try {                                                                    \
      stmt;                                                                  \
      ADD_FAILURE() << "expected " << ::rslab::to_string(errc);              \
    } catch (const ::rslab::Error& e) {                                      \
      EXPECT_EQ(e.code(), errc) << e.what();                                 \
    }                                                                        \
  } while (false)

// Hand-rolled generators for property tests. Deliberately not the library's
// SplitMix64 so sampler bugs cannot hide behind a shared stream.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  bool coin(double p) { return unit() < p; }

  gf::Elem elem(const gf::Field& f) { return f.element(static_cast<std::uint32_t>(below(f.order()))); }
  gf::Elem nonzero(const gf::Field& f) { return f.element(static_cast<std::uint32_t>(1 + below(f.order() - 1))); }

  std::vector<gf::Elem> coeffs(const gf::Field& f, std::size_t n) {
    std::vector<gf::Elem> out(n);
    for (auto& c : out) c = elem(f);
    return out;
  }

  // Each (position, element) kept with probability `density`.
  recovery::Instance instance(const gf::Field& f, std::size_t n, double density) {
    std::vector<std::vector<gf::Elem>> lists(n);
    for (auto& list : lists) {
      for (std::uint32_t z = 0; z < f.order(); ++z) {
        if (coin(density)) list.push_back(f.element(z));
      }
    }
    return recovery::Instance::from_lists(f, lists);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace rslab::testing
