#include "selfcheck.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <sstream>

#include "output.hpp"
#include "rslab/coincnf.hpp"
#include "rslab/error.hpp"
#include "rslab/experiments.hpp"
#include "rslab/fourier.hpp"
#include "rslab/gf.hpp"
#include "rslab/parallel.hpp"
#include "rslab/randmodel.hpp"
#include "rslab/recovery.hpp"
#include "rslab/rscode.hpp"

namespace rslab::cli {
namespace {

using gf::Elem;
using gf::Field;
using randmodel::SeedSpec;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Suite {
 public:
  explicit Suite(const SelfcheckOptions& options) : opt_(options) {}

  void run(const std::string& module, const std::string& check, const std::function<Outcome()>& fn) {
    CheckRow row{module, check, false, ""};
    try {
      const auto outcome = fn();
      row.pass = outcome.pass;
      row.detail = outcome.detail;
    } catch (const std::exception& e) {
      row.detail = std::string("error: ") + e.what();
    }
    rows_.push_back(std::move(row));
  }

  const SelfcheckOptions& opt() const { return opt_; }
  bool fast() const { return opt_.fast; }
  std::vector<CheckRow> take() { return std::move(rows_); }

 private:
  SelfcheckOptions opt_;
  std::vector<CheckRow> rows_;
};

// Sub-seeds keep the checks independent of each other's trial counts.
std::uint64_t sub_seed(std::uint64_t master, std::uint64_t tag) { return randmodel::mix64(master ^ randmodel::mix64(tag)); }

Outcome field_axioms(const Suite& s) {
  const std::vector<std::string> fields =
      s.fast() ? std::vector<std::string>{"2", "3", "4", "5", "8", "9"}
               : std::vector<std::string>{"2", "3", "4", "5", "7", "8", "9", "16", "25", "27", "32", "49", "64", "81", "128", "256"};
  for (const auto& name : fields) {
    const Field f = Field::parse(name);
    const std::uint32_t q = f.order();
    for (std::uint32_t a = 0; a < q; ++a) {
      const Elem x(a);
      if (!f.add(x, f.neg(x)).is_zero()) return {false, "additive inverse fails in GF(" + name + ")"};
      if (a != 0 && f.mul(x, f.inv(x)) != f.one()) return {false, "multiplicative inverse fails in GF(" + name + ")"};
    }
    auto rng = SeedSpec{s.opt().seed, q}.stream();
    for (int i = 0; i < 300; ++i) {
      const Elem a(static_cast<std::uint32_t>(rng.below(q)));
      const Elem b(static_cast<std::uint32_t>(rng.below(q)));
      const Elem c(static_cast<std::uint32_t>(rng.below(q)));
      if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))) {
        return {false, "distributivity fails in GF(" + name + ")"};
      }
      if (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c))) return {false, "associativity fails in GF(" + name + ")"};
    }
  }
  return {true, std::to_string(fields.size()) + " fields"};
}

Outcome default_moduli() {
  const std::vector<std::pair<std::string, std::vector<std::uint32_t>>> expected{
      {"4", {1, 1, 1}}, {"8", {1, 1, 0, 1}}, {"9", {1, 0, 1}}, {"16", {1, 1, 0, 0, 1}}};
  for (const auto& [name, poly] : expected) {
    const Field f = Field::parse(name);
    const auto m = f.modulus();
    if (!std::equal(m.begin(), m.end(), poly.begin(), poly.end())) return {false, "GF(" + name + ") modulus"};
  }
  return {true, "GF(4) GF(8) GF(9) GF(16)"};
}

Outcome wtdist_grid(const Suite& s) {
  const std::vector<std::uint32_t> qs{2, 3, 4, 5, 7, 8, 9, 11, 13, 16};
  const double limit = s.fast() ? 1e4 : 1e6;
  int cases = 0;
  for (const auto q : qs) {
    const Field f = Field::parse(std::to_string(q));
    for (int d = 0; d <= 3 && d < static_cast<int>(q); ++d) {
      if (std::pow(static_cast<double>(q), d + 1) > limit) continue;
      const auto code = rs::RsCode::full(f, d);
      auto formula = rs::weight_distribution_exact(code);
      if (s.opt().mutate == "wtdist") formula[code.length()] += 1;
      if (formula != rs::weight_distribution_brute_force(code)) {
        return {false, "mismatch at q=" + std::to_string(q) + " d=" + std::to_string(d)};
      }
      ++cases;
    }
  }
  return {true, std::to_string(cases) + " (q,d) pairs exact"};
}

Outcome wtdist_rs51(const Suite& s) {
  const auto code = rs::RsCode::full(Field::parse("5"), 1);
  auto wd = rs::weight_distribution_exact(code);
  if (s.opt().mutate == "wtdist") wd[code.length()] += 1;
  const bool ok = wd.nonzero() == std::map<std::size_t, rs::BigInt>{{0, 1}, {4, 20}, {5, 4}};
  return {ok, ok ? "{0:1, 4:20, 5:4}" : "unexpected distribution"};
}

Outcome dual_grid() {
  int cases = 0;
  for (const std::uint32_t q : {3u, 4u, 5u, 7u}) {
    const Field f = Field::parse(std::to_string(q));
    for (int d = 0; d <= 3 && d < static_cast<int>(q); ++d) {
      const auto code = rs::RsCode::full(f, d);
      const auto dual = rs::dual_code(code);
      if (code.dimension() + dual.code.dimension() != q || !rs::orthogonal(rs::generator(code), dual.code)) {
        return {false, "dual fails at q=" + std::to_string(q) + " d=" + std::to_string(d)};
      }
      ++cases;
    }
  }
  const Field f3 = Field::parse("3");
  const bool alt_fails =
      !rs::orthogonal(rs::generator(rs::RsCode::full(f3, 1)), rs::generator(rs::RsCode::full(f3, 1)));
  if (!alt_fails) return {false, "degree q-d-1 unexpectedly orthogonal at q=3 d=1"};
  return {true, std::to_string(cases) + " pairs; degree q-d-1 not orthogonal at q=3 d=1"};
}

Outcome recovery_oracle(const Suite& s) {
  const std::vector<std::uint32_t> qs = s.fast() ? std::vector<std::uint32_t>{3, 4, 5, 7}
                                                 : std::vector<std::uint32_t>{2, 3, 4, 5, 7, 8, 9};
  const std::uint64_t per = s.fast() ? 20 : 200;
  const int max_d = s.fast() ? 2 : 3;
  const std::vector<double> ps{0.3, 0.5, 0.7, 0.9};
  std::uint64_t instances = 0;
  std::uint64_t found = 0;
  for (const auto q : qs) {
    const Field f = Field::parse(std::to_string(q));
    for (int d = 0; d <= max_d && d < static_cast<int>(q); ++d) {
      const auto code = rs::RsCode::full(f, d);
      std::vector<int> bad(per, 0);
      std::vector<int> hit(per, 0);
      const std::uint64_t seed = sub_seed(s.opt().seed, q * 16 + static_cast<std::uint64_t>(d));
      parallel_for(per, s.opt().workers, [&](std::size_t t) {
        const auto inst = randmodel::sample_instance(f, q, randmodel::Iid{ps[t % ps.size()]}, SeedSpec{seed, t});
        const auto fast = recovery::count(code, inst);
        const auto slow = recovery::count_by_enumeration(code, inst);
        const bool dec = recovery::decide(code, inst);
        bad[t] = fast.count != slow.count || fast.found != slow.found || dec != slow.found;
        hit[t] = slow.found;
      });
      for (std::uint64_t t = 0; t < per; ++t) {
        if (bad[t]) return {false, "mismatch at q=" + std::to_string(q) + " d=" + std::to_string(d)};
        found += static_cast<std::uint64_t>(hit[t]);
      }
      instances += per;
    }
  }
  return {true, std::to_string(instances) + " instances, " + std::to_string(found) + " recoverable"};
}

Outcome expectation(const Suite& s) {
  const std::uint64_t q = 5;
  const int d = 1;
  const double p = 0.6;
  const std::uint64_t trials = s.fast() ? 20'000 : 100'000;
  const Field f = Field::parse("5");
  const auto code = rs::RsCode::full(f, d);
  std::vector<double> xs(trials);
  const std::uint64_t seed = sub_seed(s.opt().seed, 101);
  parallel_for(trials, s.opt().workers, [&](std::size_t t) {
    const auto inst = randmodel::sample_instance(f, q, randmodel::Iid{p}, SeedSpec{seed, t});
    xs[t] = static_cast<double>(recovery::count(code, inst).count);
  });
  double sum = 0.0;
  for (const double x : xs) sum += x;
  const double mean = sum / static_cast<double>(trials);
  const double ex = randmodel::expected_count(q, d, p);
  const double var = randmodel::second_moment_exact(q, d, p) - ex * ex;
  const double se = std::sqrt(var / static_cast<double>(trials));
  const double z = (mean - ex) / se;
  return {std::abs(z) <= 4.0, "mean " + fmt_prob(mean) + " vs " + fmt_prob(ex) + ", z=" + fmt_prob(z)};
}

Outcome predictor_order() {
  for (const std::uint64_t q : {4ull, 8ull, 16ull, 32ull}) {
    for (int d = 0; d < 4; ++d) {
      for (double p = 0.05; p < 1.0; p += 0.05) {
        const double m = randmodel::markov_upper(q, d, p);
        const double z = randmodel::pz_lower(q, d, p);
        if (!(z >= 0.0 && z <= m + 1e-12 && m <= 1.0)) return {false, "pz > markov at q=" + std::to_string(q)};
        if (randmodel::second_moment_exact(q, d, p) > randmodel::second_moment_upper(q, d, p) * (1 + 1e-9)) {
          return {false, "exact second moment above the e^{1/p} bound at q=" + std::to_string(q)};
        }
      }
    }
  }
  return {true, "0 <= pz <= markov <= 1, E[X^2] <= E[X] + e^{1/p} E[X]^2"};
}

Outcome fourier_identity(const Suite& s) {
  const std::uint64_t trials = s.fast() ? 20 : 100;
  double worst = 0.0;
  for (const auto& [name, d, p] : {std::tuple{"5", 2, 0.6}, std::tuple{"7", 4, 0.75}}) {
    const auto code = rs::RsCode::full(Field::parse(name), d);
    const auto report = fourier::fourier_check(code, p, trials, sub_seed(s.opt().seed, 202), s.opt().workers);
    const double tol = 1e-6 * static_cast<double>(code.size());
    worst = std::max(worst, report.max_count_error / tol);
    if (report.max_count_error > tol) return {false, std::string("count mismatch over GF(") + name + ")"};
  }
  return {true, "max error " + fmt_prob(worst) + " of tolerance"};
}

Outcome fourier_r_squared(const Suite& s) {
  const auto code = rs::RsCode::full(Field::parse("3"), 1);
  const std::uint64_t trials = s.fast() ? 10'000 : 100'000;
  const auto report = fourier::fourier_check(code, 1.0 / 3.0, trials, sub_seed(s.opt().seed, 303), s.opt().workers);
  const double exact = 16.0 / 19683.0;
  const bool closed = std::abs(report.exact_r_squared - exact) <= 1e-15;
  const double z = (report.mean_r_squared - exact) / report.stderr_r_squared;
  return {closed && std::abs(z) <= 4.0,
          "exact " + fmt_prob(report.exact_r_squared) + ", mean " + fmt_prob(report.mean_r_squared) + ", z=" + fmt_prob(z)};
}

Outcome parseval(const Suite& s) {
  for (const char* name : {"5", "16", "17", "27", "64"}) {
    const Field f = Field::parse(name);
    const fourier::CharacterTable table(f);
    auto rng = SeedSpec{s.opt().seed, f.order()}.stream();
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<Elem> subset;
      for (std::uint32_t x = 0; x < f.order(); ++x) {
        if (rng.bernoulli(0.5)) subset.emplace_back(x);
      }
      const auto spec = fourier::indicator_spectrum(table, subset);
      double energy = 0.0;
      for (const auto& c : spec) energy += std::norm(c);
      const double expected = static_cast<double>(subset.size()) / f.order();
      if (std::abs(energy - expected) > 1e-9 * std::max(expected, 1.0)) {
        return {false, std::string("Parseval fails in GF(") + name + ")"};
      }
    }
  }
  return {true, "GF(5) GF(16) GF(17) GF(27) GF(64)"};
}

Outcome tribes(const Suite& s) {
  const std::uint64_t trials = s.fast() ? 2'000 : 10'000;
  const auto grid = experiments::linear_grid(0.2, 0.4, 21);
  const auto result =
      experiments::scan(experiments::TribesSpec{2, 8}, grid, trials, sub_seed(s.opt().seed, 404), s.opt().workers);
  const double truth = experiments::tribes_crossing(2, 8);
  const bool ok = result.crossing && result.isotone && result.crossing_ci.lo <= truth && truth <= result.crossing_ci.hi;
  std::string detail = "crossing ";
  detail += result.crossing ? fmt_prob(*result.crossing) : std::string("none");
  detail += " ci [" + fmt_prob(result.crossing_ci.lo) + ", " + fmt_prob(result.crossing_ci.hi) + "] vs " + fmt_prob(truth);
  return {ok, detail};
}

Outcome ap_scan(const Suite& s) {
  const experiments::ApSpec spec{Field::parse("8"), 4};
  const std::uint64_t trials = s.fast() ? 200 : 500;
  const auto grid = experiments::default_ap_grid(spec);
  const auto result = experiments::scan(spec, grid, trials, sub_seed(s.opt().seed, 505), s.opt().workers);
  const auto check = experiments::check_predictors(result, 8, 4);
  std::string detail = "isotone=" + std::string(result.isotone ? "true" : "false") +
                       " predictors=" + (check.ok ? "ok" : "violated");
  if (result.crossing) detail += " crossing " + fmt_prob(*result.crossing);
  return {result.isotone && check.ok, detail};
}

Outcome agreement(const Suite& s) {
  const Field f = Field::parse(s.fast() ? "8" : "16");
  const int d = s.fast() ? 1 : 2;
  const std::uint64_t trials = s.fast() ? 200 : 1000;
  const auto report = experiments::agreement_experiment(f, d, 0.25, trials, sub_seed(s.opt().seed, 606), s.opt().workers);
  const bool ok = report.fraction_at_or_below_union >= 0.99 && report.median <= report.union_bound_point &&
                  report.median >= report.window_lo;
  return {ok, "median " + std::to_string(report.median) + ", union point " + std::to_string(report.union_bound_point) +
                  ", below " + fmt_prob(report.fraction_at_or_below_union)};
}

Outcome coin_quarter() {
  const auto plan = coin::plan_cnf(0.25, 4);
  const bool ok = plan.k == std::vector<std::uint32_t>{2} && plan.t == 2 && coin::fair_probability(plan) == coin::Rational(1, 4);
  return {ok, "k=(2) t=2 P=1/4"};
}

Outcome coin_sandwich(const Suite& s) {
  auto rng = SeedSpec{s.opt().seed, 707}.stream();
  const int count = s.fast() ? 50 : 200;
  for (int i = 0; i < count; ++i) {
    const std::uint32_t sz = 4 + static_cast<std::uint32_t>(rng.below(8));
    const double p = std::exp2(-static_cast<double>(sz) * rng.uniform());
    if (!(p < 1.0)) continue;
    const auto plan = coin::plan_cnf(p, sz);
    const std::uint32_t k1 = plan.k.empty() ? 0 : plan.k[0];
    if (k1 != static_cast<std::uint32_t>(std::floor(std::log2(1.0 / p)))) return {false, "k_1 formula"};
    for (std::size_t j = 1; j < plan.k.size(); ++j) {
      if (plan.k[j] > 3) return {false, "k_j > 3"};
    }
    if (plan.t >= static_cast<std::uint64_t>(sz) * sz) return {false, "t >= s^2"};
    if (!coin::sandwich(plan).holds) return {false, "sandwich fails"};
  }
  return {true, std::to_string(count) + " plans"};
}

Outcome coin_separation(const Suite& s) {
  const auto plan = coin::plan_cnf(1.0 / 16.0, 8);
  const std::uint64_t trials = s.fast() ? 100'000 : 1'000'000;
  const auto seed = sub_seed(s.opt().seed, 808);
  const auto hi = coin::measure_bias(plan, 0.55, trials, seed, s.opt().workers);
  const auto lo = coin::measure_bias(plan, 0.45, trials, seed ^ 1, s.opt().workers);
  return {hi.ci.lo > lo.ci.hi, fmt_prob(lo.estimate) + " < " + fmt_prob(hi.estimate)};
}

}  // namespace

std::vector<CheckRow> run_selfcheck(const SelfcheckOptions& options) {
  Suite s(options);
  s.run("gf", "field axioms", [&] { return field_axioms(s); });
  s.run("gf", "default moduli", [] { return default_moduli(); });
  s.run("rscode", "wtdist formula vs brute force", [&] { return wtdist_grid(s); });
  s.run("rscode", "wtdist RS[5,1]", [&] { return wtdist_rs51(s); });
  s.run("rscode", "dual of degree q-d-2", [] { return dual_grid(); });
  s.run("recovery", "search vs enumeration", [&] { return recovery_oracle(s); });
  s.run("randmodel", "mean of X", [&] { return expectation(s); });
  s.run("randmodel", "predictor ordering", [] { return predictor_order(); });
  s.run("fourier", "count identity", [&] { return fourier_identity(s); });
  s.run("fourier", "E|R|^2 over GF(3)", [&] { return fourier_r_squared(s); });
  s.run("fourier", "Parseval", [&] { return parseval(s); });
  s.run("experiments", "tribes(2,8) crossing", [&] { return tribes(s); });
  s.run("experiments", "AP scan GF(8) d=4", [&] { return ap_scan(s); });
  s.run("experiments", "agreement", [&] { return agreement(s); });
  s.run("coincnf", "p=1/4 plan", [] { return coin_quarter(); });
  s.run("coincnf", "observation and sandwich", [&] { return coin_sandwich(s); });
  s.run("coincnf", "bias separation", [&] { return coin_separation(s); });
  return s.take();
}

}  // namespace rslab::cli
