#include "rslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rslab/error.hpp"
#include "rslab/parallel.hpp"
#include "rslab/randmodel.hpp"
#include "rslab/recovery.hpp"
#include "rslab/rscode.hpp"

namespace rslab::experiments {
namespace {

using randmodel::SeedSpec;
using randmodel::SplitMix64;

bool evaluate_ap(const ApSpec& spec, const std::vector<bool>& bits) {
  const std::uint32_t q = spec.field.order();
  auto inst = recovery::Instance::full_length(spec.field);
  for (std::uint32_t i = 0; i < q; ++i) {
    for (std::uint32_t z = 0; z < q; ++z) {
      if (bits[static_cast<std::size_t>(i) * q + z]) inst.insert(i, gf::Elem(z));
    }
  }
  return recovery::decide(rs::RsCode::full(spec.field, spec.degree), inst);
}

bool evaluate_tribes(const TribesSpec& spec, const std::vector<bool>& bits) {
  for (std::uint32_t j = 0; j < spec.l; ++j) {
    bool all = true;
    for (std::uint32_t i = 0; i < spec.b && all; ++i) all = bits[static_cast<std::size_t>(j) * spec.b + i];
    if (all) return true;
  }
  return false;
}

std::vector<bool> draw_bits(std::size_t width, double p, SplitMix64& rng) {
  std::vector<bool> bits(width);
  for (std::size_t i = 0; i < width; ++i) bits[i] = rng.bernoulli(p);
  return bits;
}

// First x where the piecewise-linear curve through (grid, values) reaches
// level; the curve is assumed nondecreasing.
std::optional<double> first_reach(std::span<const double> grid, std::span<const double> values, double level) {
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] < level) continue;
    if (j == 0) {
      if (values[0] == level) return grid[0];
      return std::nullopt;
    }
    const double v0 = values[j - 1];
    const double v1 = values[j];
    return grid[j - 1] + (level - v0) / (v1 - v0) * (grid[j] - grid[j - 1]);
  }
  return std::nullopt;
}

}  // namespace

std::size_t input_width(const MonotoneFunctionSpec& spec) {
  if (const auto* ap = std::get_if<ApSpec>(&spec)) {
    return static_cast<std::size_t>(ap->field.order()) * ap->field.order();
  }
  if (const auto* tribes = std::get_if<TribesSpec>(&spec)) {
    return static_cast<std::size_t>(tribes->b) * tribes->l;
  }
  return std::get<OracleSpec>(spec).width;
}

bool evaluate(const MonotoneFunctionSpec& spec, const std::vector<bool>& bits) {
  if (bits.size() != input_width(spec)) {
    throw Error(Errc::WrongWidth, "expected " + std::to_string(input_width(spec)) + " bits");
  }
  if (const auto* ap = std::get_if<ApSpec>(&spec)) return evaluate_ap(*ap, bits);
  if (const auto* tribes = std::get_if<TribesSpec>(&spec)) return evaluate_tribes(*tribes, bits);
  return std::get<OracleSpec>(spec).fn(bits);
}

std::size_t monotonicity_violations(const MonotoneFunctionSpec& spec, std::size_t samples, std::uint64_t seed) {
  const std::size_t width = input_width(spec);
  std::size_t violations = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    SplitMix64 rng = SeedSpec{seed, s}.stream();
    const double p = rng.uniform();
    auto x = draw_bits(width, p, rng);
    auto y = x;
    const double flip = rng.uniform();
    for (std::size_t i = 0; i < width; ++i) {
      if (!y[i] && rng.bernoulli(flip)) y[i] = true;
    }
    if (evaluate(spec, x) && !evaluate(spec, y)) ++violations;
  }
  return violations;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n == 0 || !(lo <= hi)) throw Error(Errc::InvalidGrid, "need n >= 1 and lo <= hi");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  if (n > 1) grid.back() = hi;
  return grid;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (n == 0 || !(lo > 0.0 && lo <= hi)) throw Error(Errc::InvalidGrid, "need n >= 1 and 0 < lo <= hi");
  std::vector<double> grid(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) grid[i] = n == 1 ? lo : std::exp(a + (b - a) * static_cast<double>(i) / (n - 1));
  grid.front() = lo;
  if (n > 1) grid.back() = hi;
  return grid;
}

std::vector<double> default_ap_grid(const ApSpec& spec) {
  const double q = spec.field.order();
  const double centre = std::pow(q, -static_cast<double>(spec.degree) / q);
  return log_grid(centre / 4.0, std::min(1.0, 4.0 * centre), 21);
}

ScanResult scan(const MonotoneFunctionSpec& spec, std::span<const double> grid, std::uint64_t trials,
                std::uint64_t seed, std::size_t workers) {
  if (grid.empty()) throw Error(Errc::InvalidGrid, "empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw Error(Errc::InvalidGrid, "grid values must lie in [0, 1]");
    if (i > 0 && grid[i] < grid[i - 1]) throw Error(Errc::InvalidGrid, "grid must be sorted");
  }
  if (trials < 100) throw Error(Errc::ParameterOutOfRange, "need at least 100 trials per point");
  if (trials >= (std::uint64_t{1} << 32)) throw Error(Errc::ParameterOutOfRange, "too many trials per point");

  const std::size_t points = grid.size();
  const std::size_t width = input_width(spec);
  std::vector<std::uint8_t> outcomes(points * trials);
  parallel_for(outcomes.size(), workers, [&](std::size_t k) {
    const std::size_t i = k / trials;
    const std::uint64_t t = k % trials;
    SplitMix64 rng = SeedSpec{seed, (static_cast<std::uint64_t>(i) << 32) | t}.stream();
    outcomes[k] = evaluate(spec, draw_bits(width, grid[i], rng)) ? 1 : 0;
  });

  ScanResult out;
  out.grid.assign(grid.begin(), grid.end());
  out.trials = trials;
  out.seed = seed;
  std::vector<double> lo(points);
  std::vector<double> hi(points);
  for (std::size_t i = 0; i < points; ++i) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) hits += outcomes[i * trials + t];
    out.successes.push_back(hits);
    out.fhat.push_back(static_cast<double>(hits) / static_cast<double>(trials));
    out.ci.push_back(stats::wilson(hits, trials));
    lo[i] = out.ci.back().lo;
    hi[i] = out.ci.back().hi;
  }
  const std::vector<double> weights(points, static_cast<double>(trials));
  out.smoothed = stats::isotonic_fit(out.fhat, weights);
  out.crossing = first_reach(out.grid, out.smoothed, 0.5);
  const auto band_lo = stats::isotonic_fit(lo, weights);
  const auto band_hi = stats::isotonic_fit(hi, weights);
  out.crossing_ci.lo = first_reach(out.grid, band_hi, 0.5).value_or(out.grid.front());
  out.crossing_ci.hi = first_reach(out.grid, band_lo, 0.5).value_or(out.grid.back());
  for (std::size_t i = 0; i < points && out.isotone; ++i) {
    for (std::size_t j = i + 1; j < points; ++j) {
      if (out.ci[i].lo > out.ci[j].hi) {
        out.isotone = false;
        break;
      }
    }
  }
  return out;
}

double tribes_analytic(std::uint32_t b, std::uint32_t l, double p) {
  if (b == 0 || l == 0) throw Error(Errc::ParameterOutOfRange, "tribes needs b, l >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidProbability, "p = " + std::to_string(p));
  return 1.0 - std::pow(1.0 - std::pow(p, b), l);
}

double tribes_crossing(std::uint32_t b, std::uint32_t l) {
  if (b == 0 || l == 0) throw Error(Errc::ParameterOutOfRange, "tribes needs b, l >= 1");
  return std::pow(1.0 - std::pow(2.0, -1.0 / l), 1.0 / b);
}

double fk_eta(double p_crit, double eps, double n, double b) {
  if (!(eps > 0.0 && eps < 0.25)) throw Error(Errc::ParameterOutOfRange, "need 0 < eps < 1/4");
  if (!(p_crit > 0.0 && p_crit <= 0.5)) throw Error(Errc::ParameterOutOfRange, "need 0 < p_crit <= 1/2");
  if (!(n >= 2.0)) throw Error(Errc::ParameterOutOfRange, "need n >= 2");
  if (!(b > 0.0)) throw Error(Errc::ParameterOutOfRange, "need B > 0");
  return b * std::log(1.0 / eps) * std::log(1.0 / p_crit) / std::log(n);
}

std::optional<WindowFit> fit_fk_constant(const ScanResult& result, std::size_t width, double eps) {
  if (!result.crossing || width < 2) return std::nullopt;
  const auto lo = first_reach(result.grid, result.smoothed, eps);
  const auto hi = first_reach(result.grid, result.smoothed, 1.0 - eps);
  const double p_crit = *result.crossing;
  if (!lo || !hi || !(p_crit > 0.0 && p_crit < 1.0)) return std::nullopt;
  WindowFit fit;
  fit.p_lo = *lo;
  fit.p_hi = *hi;
  fit.p_crit = p_crit;
  fit.eta = std::max(1.0 - fit.p_lo / p_crit, fit.p_hi / p_crit - 1.0);
  const double unit = std::log(1.0 / eps) * std::log(1.0 / p_crit) / std::log(static_cast<double>(width));
  fit.fitted_b = fit.eta / unit;
  return fit;
}

PredictorCheck check_predictors(const ScanResult& result, std::uint64_t q, int d) {
  PredictorCheck check;
  const double n = static_cast<double>(result.trials);
  for (std::size_t i = 0; i < result.grid.size(); ++i) {
    const double p = result.grid[i];
    const double f = result.fhat[i];
    const double m = randmodel::markov_upper(q, d, p);
    const double z = p > 0.0 ? randmodel::pz_lower(q, d, p) : 0.0;
    const double var = std::max({f * (1.0 - f), m * (1.0 - m), z * (1.0 - z)});
    const double sigma = std::sqrt(var / n);
    check.markov.push_back(m);
    check.pz.push_back(z);
    check.sigma.push_back(sigma);
    if (f > m + 3.0 * sigma || f < z - 3.0 * sigma) check.ok = false;
  }
  return check;
}

AgreementReport agreement_experiment(const gf::Field& field, int d, double p, std::uint64_t trials,
                                     std::uint64_t seed, std::size_t workers) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidProbability, "p = " + std::to_string(p));
  if (trials == 0) throw Error(Errc::ParameterOutOfRange, "need at least one trial");
  const auto code = rs::RsCode::full(field, d);
  rs::checked_enumeration_size(code);
  const std::uint32_t q = field.order();

  AgreementReport report;
  report.values.resize(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const auto inst = randmodel::sample_instance(field, q, randmodel::Iid{p}, SeedSpec{seed, t});
    report.values[t] = static_cast<std::uint32_t>(recovery::max_agreement(code, inst).value);
  });

  report.union_bound_point = q;
  for (std::uint32_t a = 0; a <= q; ++a) {
    if (randmodel::agreement_tail(q, d, p, a) < 0.01) {
      report.union_bound_point = a;
      break;
    }
  }
  const double log_inv_p = -std::log(p);
  if (p == 0.0) {
    report.formula_point = 0.0;
    report.window_lo = 0.0;
  } else if (p == 1.0) {
    report.formula_point = q;
    report.window_lo = 0.0;
  } else {
    report.formula_point = d * std::log(static_cast<double>(q)) / log_inv_p;
    report.window_lo = report.formula_point - std::ceil(q / log_inv_p);
  }

  report.histogram.assign(q + 1, 0);
  std::uint64_t below = 0;
  for (const auto v : report.values) {
    ++report.histogram[v];
    if (v <= report.union_bound_point) ++below;
  }
  report.fraction_at_or_below_union = static_cast<double>(below) / static_cast<double>(trials);
  auto sorted = report.values;
  std::sort(sorted.begin(), sorted.end());
  report.median = sorted[(sorted.size() - 1) / 2];
  report.min = sorted.front();
  report.max = sorted.back();
  return report;
}

}  // namespace rslab::experiments
