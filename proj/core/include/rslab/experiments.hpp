#pragma once

// Monte Carlo threshold scans for monotone boolean functions (AP_r, tribes,
// caller-supplied oracles), the agreement-with-errors experiment and the
// Friedgut-Kalai window predictor.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rslab/gf.hpp"
#include "rslab/stats.hpp"

namespace rslab::experiments {

/// AP_r with rq = degree: does some degree <= d polynomial have its graph inside
/// S? Input bit i*q + z means (x_i, z) is in S.
struct ApSpec {
  gf::Field field;
  int degree = 0;
};

/// OR over l blocks of the AND of b bits; block j holds bits j*b .. j*b+b-1.
struct TribesSpec {
  std::uint32_t b = 1;
  std::uint32_t l = 1;
};

/// Any monotone function over a fixed number of bits.
struct OracleSpec {
  std::size_t width = 0;
  std::function<bool(const std::vector<bool>&)> fn;
};

using MonotoneFunctionSpec = std::variant<ApSpec, TribesSpec, OracleSpec>;

std::size_t input_width(const MonotoneFunctionSpec& spec);
/// Throws WrongWidth when bits.size() differs from the input width.
bool evaluate(const MonotoneFunctionSpec& spec, const std::vector<bool>& bits);

/// Random upward perturbations x <= y, counting pairs with f(x) > f(y).
std::size_t monotonicity_violations(const MonotoneFunctionSpec& spec, std::size_t samples, std::uint64_t seed);

std::vector<double> linear_grid(double lo, double hi, std::size_t n);
std::vector<double> log_grid(double lo, double hi, std::size_t n);
/// 21 log-spaced points over [q^{-r}/4, min(1, 4 q^{-r})] with r = d/q.
std::vector<double> default_ap_grid(const ApSpec& spec);

struct ScanResult {
  std::vector<double> grid;
  std::vector<double> fhat;
  std::vector<stats::Interval> ci;
  std::vector<std::uint64_t> successes;
  std::vector<double> smoothed;  ///< isotonic fit of fhat
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  /// Where the smoothed estimate reaches 1/2, by linear interpolation on the
  /// lowest bracketing pair; empty when the grid does not bracket 1/2.
  std::optional<double> crossing;
  /// Crossings of the upper and lower Wilson curves.
  stats::Interval crossing_ci;
  /// False when ci[i].lo > ci[j].hi for some i < j.
  bool isotone = true;
};

/// Trial t at grid point i uses stream (seed, (i << 32) | t). Requires a sorted
/// grid inside [0, 1] (InvalidGrid) and trials >= 100 (ParameterOutOfRange).
ScanResult scan(const MonotoneFunctionSpec& spec, std::span<const double> grid, std::uint64_t trials,
                std::uint64_t seed, std::size_t workers);

/// 1 - (1 - p^b)^l.
double tribes_analytic(std::uint32_t b, std::uint32_t l, double p);
/// The p with tribes_analytic = 1/2: (1 - 2^{-1/l})^{1/b}.
double tribes_crossing(std::uint32_t b, std::uint32_t l);

/// B ln(1/eps) ln(1/p_crit) / ln n. Needs 0 < eps < 1/4, 0 < p_crit <= 1/2,
/// n >= 2, B > 0.
double fk_eta(double p_crit, double eps, double n, double b = 1.0);

struct WindowFit {
  double p_lo = 0.0;   ///< smoothed fhat reaches eps
  double p_hi = 0.0;   ///< smoothed fhat reaches 1 - eps
  double p_crit = 0.0;
  double eta = 0.0;    ///< max(1 - p_lo/p_crit, p_hi/p_crit - 1)
  double fitted_b = 0.0;
};

/// The B for which the measured window equals the predicted one; empty when the
/// grid does not cover the window or p_crit is outside (0, 1).
std::optional<WindowFit> fit_fk_constant(const ScanResult& result, std::size_t width, double eps = 0.1);

/// Markov and Paley-Zygmund consistency of an AP scan.
struct PredictorCheck {
  std::vector<double> markov;
  std::vector<double> pz;
  std::vector<double> sigma;  ///< sqrt(max(f(1-f), m(1-m), z(1-z)) / N)
  bool ok = true;
};

PredictorCheck check_predictors(const ScanResult& result, std::uint64_t q, int d);

struct AgreementReport {
  std::vector<std::uint64_t> histogram;  ///< index = max agreement, 0..q
  std::vector<std::uint32_t> values;     ///< per trial
  std::uint32_t union_bound_point = 0;   ///< smallest a with agreement tail < 0.01
  double formula_point = 0.0;            ///< d ln q / ln(1/p)
  double window_lo = 0.0;                ///< formula_point - ceil(q / ln(1/p))
  double fraction_at_or_below_union = 0.0;
  std::uint32_t median = 0;
  std::uint32_t min = 0;
  std::uint32_t max = 0;
};

/// Max agreement of RS[q,d] with iid(p) instances; needs q^{d+1} <= 10^7.
AgreementReport agreement_experiment(const gf::Field& field, int d, double p, std::uint64_t trials,
                                     std::uint64_t seed, std::size_t workers);

}  // namespace rslab::experiments
