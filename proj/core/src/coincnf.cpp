#include "rslab/coincnf.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "rslab/error.hpp"
#include "rslab/parallel.hpp"
#include "rslab/randmodel.hpp"

namespace rslab::coin {
namespace {

using boost::multiprecision::cpp_int;

// Every finite double is a dyadic rational, so this is exact.
Rational exact_rational(double x) {
  int exponent = 0;
  const double frac = std::frexp(x, &exponent);
  const auto mantissa = static_cast<std::int64_t>(std::ldexp(frac, 53));
  exponent -= 53;
  Rational out{cpp_int(mantissa)};
  if (exponent >= 0) return out * Rational(cpp_int(1) << exponent);
  return out / Rational(cpp_int(1) << -exponent);
}

Rational clause_factor(std::uint32_t width) {
  const cpp_int denom = cpp_int(1) << width;
  return Rational(denom - 1, denom);
}

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Rational power(const Rational& base, std::uint32_t e) {
  Rational out = 1;
  for (std::uint32_t i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

CnfPlan plan_cnf(double p, std::uint32_t s) {
  if (!(p > 0.0 && p < 1.0)) throw Error(Errc::InvalidProbability, "need 0 < p < 1");
  if (s == 0) throw Error(Errc::ParameterOutOfRange, "need s >= 1");
  if (s < 64 && p < std::ldexp(1.0, -static_cast<int>(s))) {
    throw Error(Errc::ProbabilityTooSmallForS, "need p >= 2^-s");
  }
  const Rational target = exact_rational(p);
  const std::uint64_t budget = static_cast<std::uint64_t>(s) * s;

  // Unbounded greedy, stopped once the variable budget is certainly exhausted.
  std::vector<std::uint32_t> greedy;
  std::vector<std::uint64_t> cost;
  Rational prod = 1;
  std::uint64_t used = 0;
  for (std::uint32_t j = 1; used < budget; ++j) {
    const Rational f = clause_factor(j);
    std::uint32_t kj = 0;
    while (prod * f >= target) {
      prod *= f;
      ++kj;
    }
    used += static_cast<std::uint64_t>(j) * kj;
    greedy.push_back(kj);
    cost.push_back(used);
    if (prod == target) break;
  }

  std::size_t ell = 0;
  for (std::size_t j = 0; j < greedy.size(); ++j) {
    if (greedy[j] > 0 && cost[j] < budget) ell = j + 1;
  }
  // ell = 0 (p close to 1, or s = 1) leaves the empty conjunction, which is constantly true.

  CnfPlan plan;
  plan.p = p;
  plan.s = s;
  plan.k.assign(greedy.begin(), greedy.begin() + static_cast<std::ptrdiff_t>(ell));
  std::uint64_t next = 0;
  for (std::size_t j = 0; j < ell; ++j) {
    for (std::uint32_t c = 0; c < plan.k[j]; ++c) {
      std::vector<std::uint64_t> clause(j + 1);
      for (auto& v : clause) v = next++;
      plan.clauses.push_back(std::move(clause));
    }
  }
  plan.t = next;
  return plan;
}

bool eval_cnf(const CnfPlan& plan, const std::vector<bool>& bits) {
  if (bits.size() != plan.t) throw Error(Errc::WrongWidth, "expected " + std::to_string(plan.t) + " bits");
  for (const auto& clause : plan.clauses) {
    bool any = false;
    for (const auto v : clause) any = any || bits[v];
    if (!any) return false;
  }
  return true;
}

Rational exact_probability(const CnfPlan& plan, const Rational& bias) {
  if (bias < 0 || bias > 1) throw Error(Errc::InvalidProbability, "bias outside [0, 1]");
  const Rational miss = 1 - bias;
  Rational out = 1;
  for (std::size_t j = 0; j < plan.k.size(); ++j) {
    out *= power(1 - power(miss, static_cast<std::uint32_t>(j + 1)), plan.k[j]);
  }
  return out;
}

Rational fair_probability(const CnfPlan& plan) { return exact_probability(plan, Rational(1, 2)); }

double probability_at(const CnfPlan& plan, double bias) {
  if (!(bias >= 0.0 && bias <= 1.0)) throw Error(Errc::InvalidProbability, "bias outside [0, 1]");
  double out = 1.0;
  for (std::size_t j = 0; j < plan.k.size(); ++j) {
    out *= std::pow(1.0 - std::pow(1.0 - bias, static_cast<double>(j + 1)), plan.k[j]);
  }
  return out;
}

Sandwich sandwich(const CnfPlan& plan) {
  Sandwich out;
  out.lower = exact_rational(plan.p);
  out.value = fair_probability(plan);
  out.upper = out.lower / power(clause_factor(static_cast<std::uint32_t>(plan.ell() + 1)), 4);
  out.holds = out.lower <= out.value && out.value <= out.upper;
  return out;
}

BiasReport measure_bias(const CnfPlan& plan, double bias, std::uint64_t trials, std::uint64_t seed,
                        std::size_t workers) {
  if (!(bias >= 0.0 && bias <= 1.0)) throw Error(Errc::InvalidProbability, "bias outside [0, 1]");
  if (trials < 10'000) throw Error(Errc::ParameterOutOfRange, "need at least 10^4 trials");

  std::vector<std::uint8_t> hits(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    auto rng = randmodel::SeedSpec{seed, i}.stream();
    std::vector<bool> bits(plan.t);
    for (std::size_t v = 0; v < bits.size(); ++v) bits[v] = rng.bernoulli(bias);
    hits[i] = eval_cnf(plan, bits) ? 1 : 0;
  });

  BiasReport report;
  report.input_bias = bias;
  report.trials = trials;
  for (const auto h : hits) report.successes += h;
  report.estimate = static_cast<double>(report.successes) / static_cast<double>(trials);
  report.ci = stats::wilson(report.successes, trials);
  report.closed_form = probability_at(plan, bias);
  if (bias == 0.5) report.exact_fair = fair_probability(plan).convert_to<double>();
  const auto bounds = sandwich(plan);
  report.window_lo = bounds.lower.convert_to<double>();
  report.window_hi = bounds.upper.convert_to<double>();
  return report;
}

std::string to_dimacs(const CnfPlan& plan) {
  std::ostringstream out;
  out << "c rslab coin p=" << shortest(plan.p) << " s=" << plan.s << " k=";
  for (std::size_t j = 0; j < plan.k.size(); ++j) out << (j ? "," : "") << plan.k[j];
  out << "\np cnf " << plan.t << ' ' << plan.clauses.size() << '\n';
  for (const auto& clause : plan.clauses) {
    for (const auto v : clause) out << v + 1 << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace rslab::coin
