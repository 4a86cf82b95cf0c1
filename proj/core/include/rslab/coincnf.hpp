#pragma once

// A read-once CNF F_p whose acceptance probability on fair coins is just above
// p: k_j clauses of width j for j = 1..l, chosen greedily so that
// prod_j (1 - 2^{-j})^{k_j} stays >= p, then truncated to fewer than s^2
// variables.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rslab/stats.hpp"

namespace rslab::coin {

using Rational = boost::multiprecision::cpp_rational;

struct CnfPlan {
  double p = 0.0;
  std::uint32_t s = 0;
  /// k[j-1] = number of clauses of width j; the last entry is nonzero. Empty
  /// when not even the first useful clause fits the budget.
  std::vector<std::uint32_t> k;
  std::uint64_t t = 0;  ///< sum_j j k_j
  /// Variable indices (0-based), clause-major: widths ascending, then position in clause.
  std::vector<std::vector<std::uint64_t>> clauses;

  std::size_t ell() const { return k.size(); }
};

/// Needs 0 < p < 1 (InvalidProbability), s >= 1 and 2^{-s} <= p
/// (ProbabilityTooSmallForS).
CnfPlan plan_cnf(double p, std::uint32_t s);

/// Throws WrongWidth unless bits.size() == t.
bool eval_cnf(const CnfPlan& plan, const std::vector<bool>& bits);

/// prod_j (1 - (1 - b)^j)^{k_j} for an exact input bias b.
Rational exact_probability(const CnfPlan& plan, const Rational& bias);
Rational fair_probability(const CnfPlan& plan);
/// The same product in floating point.
double probability_at(const CnfPlan& plan, double bias);

struct Sandwich {
  Rational lower;  ///< p
  Rational value;  ///< P(F_p = 1) at bias 1/2
  Rational upper;  ///< p (1 - 2^{-(l+1)})^{-4}
  bool holds = false;
};

Sandwich sandwich(const CnfPlan& plan);

struct BiasReport {
  double input_bias = 0.5;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  stats::Interval ci;
  double closed_form = 0.0;           ///< probability_at(plan, input_bias)
  std::optional<double> exact_fair;   ///< set when input_bias is exactly 1/2
  double window_lo = 0.0;             ///< fair-bias sandwich, as doubles
  double window_hi = 0.0;
};

/// Monte Carlo estimate of P(F_p = 1) with iid Bernoulli(bias) inputs. Needs
/// bias in [0, 1] and trials >= 10^4.
BiasReport measure_bias(const CnfPlan& plan, double bias, std::uint64_t trials, std::uint64_t seed,
                        std::size_t workers);

/// DIMACS CNF text, variables numbered from 1 in plan order.
std::string to_dimacs(const CnfPlan& plan);

}  // namespace rslab::coin
