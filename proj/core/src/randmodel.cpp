#include "rslab/randmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "rslab/error.hpp"
#include "rslab/rscode.hpp"

namespace rslab::randmodel {
namespace {

constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidProbability, "p = " + std::to_string(p));
}

long double log_add(long double a, long double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const long double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// a * log(p) with the convention 0 * log(0) = 0.
long double scaled_log(long double a, double p) {
  if (a == 0.0L) return 0.0L;
  return p == 0.0 ? kNegInf : a * std::log(static_cast<long double>(p));
}

long double log_binomial(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<long double>(n) + 1) - std::lgamma(static_cast<long double>(k) + 1) -
         std::lgamma(static_cast<long double>(n - k) + 1);
}

double to_double(long double log_value) { return static_cast<double>(std::exp(log_value)); }

void check_code_params(std::uint64_t q, int d) {
  if (q < 2 || d < 0 || static_cast<std::uint64_t>(d) >= q) {
    throw Error(Errc::ParameterOutOfRange, "need q >= 2 and 0 <= d < q");
  }
}

}  // namespace

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

recovery::Instance sample_instance(const gf::Field& field, std::size_t n, const SampleModel& model,
                                   SeedSpec seed) {
  const std::uint32_t q = field.order();
  if (n > q) throw Error(Errc::SizeExceedsField, "n = " + std::to_string(n) + " exceeds q");
  std::vector<gf::Elem> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = gf::Elem(static_cast<std::uint32_t>(i));
  recovery::Instance inst(field, std::move(positions));
  SplitMix64 rng = seed.stream();

  if (const auto* iid = std::get_if<Iid>(&model)) {
    check_probability(iid->p);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint32_t z = 0; z < q; ++z) {
        if (rng.bernoulli(iid->p)) inst.insert(i, gf::Elem(z));
      }
    }
  } else {
    const std::uint32_t t = std::get<FixedSize>(model).t;
    if (t > q) throw Error(Errc::SizeExceedsField, "list size " + std::to_string(t) + " exceeds q");
    std::vector<std::uint32_t> perm(q);
    for (std::size_t i = 0; i < n; ++i) {
      std::iota(perm.begin(), perm.end(), 0u);
      for (std::uint32_t j = 0; j < t; ++j) {
        const auto r = j + static_cast<std::uint32_t>(rng.below(q - j));
        std::swap(perm[j], perm[r]);
        inst.insert(i, gf::Elem(perm[j]));
      }
    }
  }
  return inst;
}

long double log_expected_count(std::uint64_t q, int d, double p) {
  check_code_params(q, d);
  check_probability(p);
  return static_cast<long double>(d + 1) * std::log(static_cast<long double>(q)) +
         scaled_log(static_cast<long double>(q), p);
}

double expected_count(std::uint64_t q, int d, double p) { return to_double(log_expected_count(q, d, p)); }

double markov_upper(std::uint64_t q, int d, double p) { return std::min(1.0, expected_count(q, d, p)); }

long double log_second_moment_upper(std::uint64_t q, int d, double p) {
  check_probability(p);
  if (p == 0.0) throw Error(Errc::ZeroProbability, "the e^{1/p} bound needs p > 0");
  const long double log_ex = log_expected_count(q, d, p);
  return log_add(log_ex, 1.0L / p + 2.0L * log_ex);
}

double second_moment_upper(std::uint64_t q, int d, double p) { return to_double(log_second_moment_upper(q, d, p)); }

bool second_moment_exact_available(std::uint64_t q, int d) {
  return d >= 0 && d <= 4096 && static_cast<double>(d + 1) * std::log2(static_cast<double>(q)) <= 8192.0;
}

long double log_second_moment_exact(std::uint64_t q, int d, double p) {
  check_code_params(q, d);
  check_probability(p);
  if (!second_moment_exact_available(q, d)) {
    throw Error(Errc::ParameterOutOfRange, "exact second moment needs (d+1) log2 q <= 8192");
  }
  const auto wd = rs::mds_weight_distribution(q, q, static_cast<std::size_t>(d) + 1);
  long double acc = kNegInf;
  for (std::size_t t = 0; t <= q; ++t) {
    if (wd[t] == 0) continue;
    acc = log_add(acc, rs::natural_log(wd[t]) + scaled_log(static_cast<long double>(q + t), p));
  }
  return static_cast<long double>(d + 1) * std::log(static_cast<long double>(q)) + acc;
}

double second_moment_exact(std::uint64_t q, int d, double p) { return to_double(log_second_moment_exact(q, d, p)); }

double pz_lower(std::uint64_t q, int d, double p) {
  const long double log_ex = log_expected_count(q, d, p);
  if (log_ex == kNegInf) return 0.0;
  const long double log_second = second_moment_exact_available(q, d) ? log_second_moment_exact(q, d, p)
                                                                     : log_second_moment_upper(q, d, p);
  return std::clamp(to_double(2.0L * log_ex - log_second), 0.0, 1.0);
}

long double log_agreement_tail(std::uint64_t q, int d, double p, std::uint32_t a) {
  check_code_params(q, d);
  check_probability(p);
  if (a > q) throw Error(Errc::ParameterOutOfRange, "agreement exceeds q");
  const long double log_code = static_cast<long double>(d + 1) * std::log(static_cast<long double>(q));
  long double acc = kNegInf;
  for (std::uint64_t ap = a; ap <= q; ++ap) {
    acc = log_add(acc, log_binomial(q, ap) + log_code + scaled_log(static_cast<long double>(ap), p));
  }
  return std::min(acc, 0.0L);
}

double agreement_tail(std::uint64_t q, int d, double p, std::uint32_t a) {
  return to_double(log_agreement_tail(q, d, p, a));
}

double chernoff_tail(std::uint64_t n, double p, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::EpsilonOutOfRange, "need 0 < eps < 1");
  check_probability(p);
  const double mu = static_cast<double>(n) * p;
  if (mu <= 0.0) return 1.0;
  return std::exp(-eps * eps * mu / 2.0);
}

}  // namespace rslab::randmodel
