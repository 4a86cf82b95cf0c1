#include "rslab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rslab/error.hpp"
#include "rslab/parallel.hpp"
#include "rslab/stats.hpp"

namespace rslab::fourier {

CharacterTable::CharacterTable(gf::Field field) : field_(std::move(field)) {
  const std::uint32_t q = field_.order();
  const std::uint32_t p = field_.characteristic();
  trace_.resize(q);
  for (std::uint32_t x = 0; x < q; ++x) trace_[x] = field_.trace(Elem(x));
  roots_.resize(p);
  for (std::uint32_t j = 0; j < p; ++j) {
    roots_[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / p);
  }
  // Exact values where they are known, so sums of roots cancel cleanly.
  roots_[0] = 1.0;
  if (p == 2) roots_[1] = -1.0;
}

Spectrum transform(const CharacterTable& table, std::span<const Complex> values) {
  const std::uint32_t q = table.field().order();
  if (values.size() != q) throw Error(Errc::ParameterOutOfRange, "need one value per field element");
  Spectrum out(q);
  for (std::uint32_t a = 0; a < q; ++a) {
    Complex acc = 0.0;
    for (std::uint32_t x = 0; x < q; ++x) {
      if (values[x] != 0.0) acc += values[x] * std::conj(table.chi(Elem(a), Elem(x)));
    }
    out[a] = acc / static_cast<double>(q);
  }
  return out;
}

namespace {

// Character sums are accumulated per residue class, then combined once: the
// count of x in A with Tr(ax) = j, times conj(root j).
Spectrum spectrum_of(const CharacterTable& table, std::span<const Elem> members) {
  const std::uint32_t q = table.field().order();
  const std::uint32_t p = table.field().characteristic();
  Spectrum out(q);
  std::vector<std::uint32_t> buckets(p);
  for (std::uint32_t a = 0; a < q; ++a) {
    std::fill(buckets.begin(), buckets.end(), 0u);
    for (Elem x : members) ++buckets[table.pairing(Elem(a), x)];
    Complex acc = 0.0;
    for (std::uint32_t j = 0; j < p; ++j) {
      if (buckets[j] != 0) acc += static_cast<double>(buckets[j]) * std::conj(table.root(j));
    }
    out[a] = acc / static_cast<double>(q);
  }
  out[0] = static_cast<double>(members.size()) / q;
  return out;
}

}  // namespace

Spectrum indicator_spectrum(const CharacterTable& table, std::span<const Elem> subset) {
  std::vector<bool> seen(table.field().order(), false);
  std::vector<Elem> members;
  for (Elem x : subset) {
    if (!table.field().contains(x)) throw Error(Errc::ElementOutOfRange, "subset element outside the field");
    if (!seen[x.index()]) {
      seen[x.index()] = true;
      members.push_back(x);
    }
  }
  return spectrum_of(table, members);
}

Spectrum indicator_spectrum(const gf::Field& field, std::span<const Elem> subset) {
  return indicator_spectrum(CharacterTable(field), subset);
}

Spectrum indicator_spectrum(const CharacterTable& table, const recovery::Instance& inst, std::size_t i) {
  const auto members = inst.list(i);
  return spectrum_of(table, members);
}

Complex inner_product(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size() || u.empty()) throw Error(Errc::ParameterOutOfRange, "length mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * std::conj(v[i]);
  return acc / static_cast<double>(u.size());
}

FourierCounter::FourierCounter(const rs::RsCode& code) : code_(code), table_(code.field()) {
  const auto dual = rs::dual_code(code_);
  const std::size_t n = code_.length();
  const long double log_size =
      static_cast<long double>(dual.code.dimension()) * std::log(static_cast<long double>(code_.field().order()));
  if (log_size > std::log(static_cast<long double>(kMaxDualCodewords)) + 1e-9L) {
    throw Error(Errc::DualTooLarge, "dual of " + code_.field().name() + " degree " + std::to_string(code_.degree()) +
                                        " has more than 10^6 codewords");
  }
  std::size_t zero_row = 0;
  rs::for_each_codeword(dual.code, kMaxDualCodewords, [&](std::span<const Elem> word) {
    bool zero = true;
    for (Elem e : word) {
      dual_.push_back(e.index());
      zero = zero && e.is_zero();
    }
    if (zero) zero_row = dual_count_;
    ++dual_count_;
  });
  if (zero_row != 0) {
    std::swap_ranges(dual_.begin(), dual_.begin() + n, dual_.begin() + zero_row * n);
  }
}

Decomposition FourierCounter::decompose(const recovery::Instance& inst) const {
  const std::size_t n = code_.length();
  if (inst.field() != code_.field() || inst.length() != n ||
      !std::equal(inst.positions().begin(), inst.positions().end(), code_.positions().begin())) {
    throw Error(Errc::MismatchedField, "instance does not match the code");
  }
  std::vector<Spectrum> spectra(n);
  double main_term = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    spectra[i] = indicator_spectrum(table_, inst, i);
    main_term *= spectra[i][0].real();
  }
  Complex r = 0.0;
  for (std::size_t w = 1; w < dual_count_; ++w) {
    const std::uint32_t* row = dual_.data() + w * n;
    Complex prod = 1.0;
    for (std::size_t i = 0; i < n && prod != 0.0; ++i) prod *= spectra[i][row[i]];
    r += prod;
  }
  const double size = std::pow(static_cast<double>(code_.field().order()), static_cast<double>(code_.dimension()));
  return {main_term, r, size * (main_term + r.real())};
}

double count_via_fourier(const rs::RsCode& code, const recovery::Instance& inst) {
  return FourierCounter(code).decompose(inst).count;
}

Complex r_term(const rs::RsCode& code, const recovery::Instance& inst) {
  return FourierCounter(code).decompose(inst).r;
}

double expected_r_squared_exact(const rs::RsCode& code, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidProbability, "p = " + std::to_string(p));
  const std::size_t n = code.length();
  const std::size_t k_dual = n - code.dimension();
  const auto q = static_cast<long double>(code.field().order());
  const long double lp = p;
  const long double b = lp * (1.0L - lp) / q;
  const long double a = lp * lp + b;
  if (b == 0.0L) return 0.0;
  const auto wd = rs::mds_weight_distribution(code.field().order(), n, k_dual);
  long double acc = 0.0L;
  for (std::size_t w = 1; w <= n; ++w) {
    if (wd[w] == 0) continue;
    const long double log_term = rs::natural_log(wd[w]) + static_cast<long double>(n - w) * std::log(a) +
                                 static_cast<long double>(w) * std::log(b);
    acc += std::exp(log_term);
  }
  return static_cast<double>(acc);
}

MainTermStatistic main_term_statistic(const recovery::Instance& inst, double r, double eps) {
  const std::uint32_t q = inst.field().order();
  if (inst.length() != q) throw Error(Errc::InvalidPositions, "main term statistic needs a full-length instance");
  bool canonical = true;
  for (std::size_t i = 0; i < q; ++i) canonical = canonical && inst.positions()[i].index() == i;
  if (!canonical) throw Error(Errc::InvalidPositions, "main term statistic needs a full-length instance");

  const long double lq = std::log(static_cast<long double>(q));
  long double log_value = 0.0L;
  for (std::size_t i = 0; i < q; ++i) {
    const std::size_t size = inst.list_size(i);
    if (size == 0) {
      log_value = -std::numeric_limits<long double>::infinity();
      break;
    }
    log_value += std::log(static_cast<long double>(size)) - lq;
  }
  const long double threshold = -static_cast<long double>(r) * q * lq + 0.9L * q * std::log1p(0.9L * eps);
  MainTermStatistic out;
  out.log_value = static_cast<double>(log_value);
  out.value = static_cast<double>(std::exp(log_value));
  out.below_threshold = log_value <= threshold;
  return out;
}

FourierCheckReport fourier_check(const rs::RsCode& code, double p, std::uint64_t trials, std::uint64_t seed,
                                 std::size_t workers) {
  if (!code.is_full_length()) throw Error(Errc::PuncturedNotSupported, "fourier check samples full-length instances");
  const FourierCounter counter(code);
  FourierCheckReport report;
  report.rows.resize(trials);
  std::vector<double> r_squared(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const auto inst = randmodel::sample_instance(code.field(), code.length(), randmodel::Iid{p},
                                                 randmodel::SeedSpec{seed, t});
    const auto dec = counter.decompose(inst);
    const auto direct = recovery::count(code, inst);
    report.rows[t] = {t, std::abs(dec.main_term), std::abs(dec.r), direct.count, dec.count};
    r_squared[t] = std::norm(dec.r);
  });
  stats::RunningMean mean;
  for (std::size_t t = 0; t < trials; ++t) {
    mean.add(r_squared[t]);
    const auto& row = report.rows[t];
    report.max_count_error =
        std::max(report.max_count_error, std::abs(row.count_fourier - static_cast<double>(row.count_direct)));
  }
  report.exact_r_squared = expected_r_squared_exact(code, p);
  report.mean_r_squared = mean.mean();
  report.stderr_r_squared = trials > 1 ? mean.stderr_of_mean() : 0.0;
  return report;
}

}  // namespace rslab::fourier
