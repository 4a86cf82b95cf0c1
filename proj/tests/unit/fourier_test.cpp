#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <tuple>

#include "rslab/fourier.hpp"
#include "rslab/stats.hpp"
#include "support.hpp"

namespace rslab {
namespace {

using fourier::CharacterTable;
using fourier::Complex;
using gf::Elem;
using gf::Field;
using recovery::Instance;
using rs::RsCode;
using testing::Gen;

const char* const kSmallFields[] = {"2", "3", "2^2", "5", "7", "2^3", "3^2", "11", "13", "2^4", "17", "19",
                                    "23", "5^2", "3^3", "29", "31", "2^5", "37", "41", "43", "47", "7^2", "53",
                                    "59", "61", "2^6"};

std::vector<Elem> random_subset(Gen& g, const Field& f, double density) {
  std::vector<Elem> out;
  for (std::uint32_t z = 0; z < f.order(); ++z) {
    if (g.coin(density)) out.push_back(f.element(z));
  }
  return out;
}

// Direct character from the definition, independent of the table's bucketing.
Complex chi_direct(const Field& f, Elem a, Elem x) {
  const double angle = 2.0 * std::numbers::pi * f.trace(f.mul(a, x)) / f.characteristic();
  return std::polar(1.0, angle);
}

std::vector<std::vector<Elem>> span(const Field& f, const std::vector<std::vector<Elem>>& basis, std::size_t n) {
  std::vector<std::vector<Elem>> out;
  const std::uint64_t total = testing::ipow(f.order(), static_cast<unsigned>(basis.size()));
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<Elem> v(n, f.zero());
    std::uint64_t rest = code;
    for (const auto& row : basis) {
      const Elem c = f.element(static_cast<std::uint32_t>(rest % f.order()));
      rest /= f.order();
      for (std::size_t i = 0; i < n; ++i) v[i] = f.add(v[i], f.mul(c, row[i]));
    }
    out.push_back(v);
  }
  return out;
}

TEST(Characters, OrthogonalityAndHomomorphism) {
  for (const char* name : kSmallFields) {
    const Field f = Field::parse(name);
    const CharacterTable table(f);
    const std::uint32_t q = f.order();
    std::vector<std::vector<Complex>> rows(q, std::vector<Complex>(q));
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t x = 0; x < q; ++x) {
        rows[a][x] = table.chi(Elem(a), Elem(x));
        ASSERT_LT(std::abs(rows[a][x] - chi_direct(f, Elem(a), Elem(x))), 1e-14);
      }
    }
    for (std::uint32_t x = 0; x < q; ++x) EXPECT_EQ(rows[0][x], Complex(1.0));
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        const Complex ip = fourier::inner_product(rows[a], rows[b]);
        ASSERT_LT(std::abs(ip - Complex(a == b ? 1.0 : 0.0)), 1e-12) << name << " " << a << " " << b;
      }
    }
    Gen g(q);
    for (int t = 0; t < 200; ++t) {
      const Elem a = g.elem(f);
      const Elem b = g.elem(f);
      const Elem x = g.elem(f);
      ASSERT_LT(std::abs(table.chi(a, x) * table.chi(b, x) - table.chi(f.add(a, b), x)), 1e-12);
    }
  }
}

TEST(Spectrum, Examples) {
  const Field f5 = Field::parse("5");
  std::vector<Elem> all;
  for (std::uint32_t z = 0; z < 5; ++z) all.push_back(f5.element(z));
  const auto full = fourier::indicator_spectrum(f5, all);
  EXPECT_NEAR(full[0].real(), 1.0, 1e-15);
  for (std::size_t a = 1; a < 5; ++a) EXPECT_LT(std::abs(full[a]), 1e-15);

  const std::vector<Elem> zero{f5.zero()};
  for (const Complex& c : fourier::indicator_spectrum(f5, zero)) EXPECT_LT(std::abs(c - Complex(0.2)), 1e-15);

  const Field f16 = Field::parse("2^4");
  Gen g(4);
  for (int t = 0; t < 20; ++t) {
    const auto subset = random_subset(g, f16, 0.4);
    const auto s = fourier::indicator_spectrum(f16, subset);
    EXPECT_EQ(s[0], Complex(static_cast<double>(subset.size()) / 16.0));
  }
  const std::vector<Elem> dup{f5.element(1), f5.element(1)};
  EXPECT_NEAR(fourier::indicator_spectrum(f5, dup)[0].real(), 0.2, 1e-15);
  const std::vector<Elem> bad{Elem(9)};
  EXPECT_RSLAB_ERROR(fourier::indicator_spectrum(f5, bad), Errc::ElementOutOfRange);
}

TEST(Spectrum, MatchesDirectTransformAndParseval) {
  Gen g(5);
  for (const char* name : kSmallFields) {
    const Field f = Field::parse(name);
    const CharacterTable table(f);
    for (int t = 0; t < 5; ++t) {
      const auto subset = random_subset(g, f, g.unit());
      std::vector<Complex> values(f.order(), 0.0);
      for (Elem x : subset) values[x.index()] = 1.0;
      const auto s = fourier::indicator_spectrum(table, subset);
      const auto direct = fourier::transform(table, values);
      double energy = 0;
      for (std::uint32_t a = 0; a < f.order(); ++a) {
        Complex manual = 0.0;
        for (Elem x : subset) manual += std::conj(chi_direct(f, Elem(a), x));
        manual /= static_cast<double>(f.order());
        ASSERT_LT(std::abs(s[a] - manual), 1e-12);
        ASSERT_LT(std::abs(s[a] - direct[a]), 1e-12);
        energy += std::norm(s[a]);
      }
      const double expected = static_cast<double>(subset.size()) / f.order();
      if (expected > 0) {
        EXPECT_NEAR(energy / expected, 1.0, 1e-9) << name;
      } else {
        EXPECT_LT(energy, 1e-30);
      }
    }
  }
}

TEST(Spectrum, Plancherel) {
  Gen g(6);
  for (const char* name : kSmallFields) {
    const Field f = Field::parse(name);
    const CharacterTable table(f);
    for (int t = 0; t < 5; ++t) {
      std::vector<Complex> u(f.order());
      std::vector<Complex> v(f.order());
      for (auto& x : u) x = g.coin(0.5) ? 1.0 : 0.0;
      // A genuinely complex function pins the conjugation convention.
      for (auto& x : v) x = Complex(g.unit() - 0.5, g.unit() - 0.5);
      const auto fu = fourier::transform(table, u);
      const auto fv = fourier::transform(table, v);
      Complex rhs = 0.0;
      for (std::size_t a = 0; a < f.order(); ++a) rhs += fu[a] * std::conj(fv[a]);
      EXPECT_LT(std::abs(fourier::inner_product(u, v) - rhs), 1e-9) << name;
    }
  }
}

// Full transform over F_q^n of the indicator of C: |C|/q^n on C-perp, 0 elsewhere.
TEST(Spectrum, LinearSpaceIndicatorIsSupportedOnDual) {
  for (auto [name, d] : {std::pair{"3", 0}, {"3", 1}, {"2^2", 1}, {"2^2", 2}}) {
    const Field f = Field::parse(name);
    const CharacterTable table(f);
    const std::size_t n = f.order();
    const RsCode code = RsCode::full(f, d);
    std::vector<std::vector<Elem>> words;
    rs::for_each_codeword(code, [&](const rs::Codeword& w) { words.push_back(w.values); });
    const auto dual = span(f, rs::dual_code(code).code.basis, n);
    const std::uint64_t points = testing::ipow(f.order(), static_cast<unsigned>(n));
    for (std::uint64_t code_a = 0; code_a < points; ++code_a) {
      std::vector<Elem> alpha(n);
      std::uint64_t rest = code_a;
      for (auto& e : alpha) {
        e = f.element(static_cast<std::uint32_t>(rest % f.order()));
        rest /= f.order();
      }
      Complex acc = 0.0;
      for (const auto& w : words) {
        Complex term = 1.0;
        for (std::size_t i = 0; i < n; ++i) term *= std::conj(table.chi(alpha[i], w[i]));
        acc += term;
      }
      acc /= static_cast<double>(points);
      const bool in_dual = std::find(dual.begin(), dual.end(), alpha) != dual.end();
      const double expected = in_dual ? static_cast<double>(words.size()) / static_cast<double>(points) : 0.0;
      ASSERT_LT(std::abs(acc - Complex(expected)), 1e-12) << name << " d=" << d;
    }
  }
}

TEST(CountViaFourier, Examples) {
  const Field f3 = Field::parse("3");
  const RsCode c31 = RsCode::full(f3, 1);
  const auto inst = Instance::from_lists(f3, std::vector<std::vector<Elem>>(3, {f3.element(0), f3.element(1)}));
  EXPECT_NEAR(fourier::count_via_fourier(c31, inst), 2.0, 1e-9);

  for (auto [name, d] : {std::pair{"5", 2}, {"7", 4}, {"2^3", 5}}) {
    const Field f = Field::parse(name);
    const RsCode code = RsCode::full(f, d);
    Instance full = Instance::full_length(f);
    for (std::size_t i = 0; i < f.order(); ++i) full.fill(i);
    const double size = std::pow(static_cast<double>(f.order()), d + 1);
    EXPECT_NEAR(fourier::count_via_fourier(code, full), size, 1e-9 * size);
    EXPECT_LT(std::abs(fourier::r_term(code, full)), 1e-12);
    Instance holey = full;
    for (std::uint32_t z = 0; z < f.order(); ++z) holey.erase(0, f.element(z));
    EXPECT_NEAR(fourier::count_via_fourier(code, holey), 0.0, 1e-9);
  }
}

TEST(CountViaFourier, SingletonListsOnACodeword) {
  Gen g(7);
  for (auto [name, d] : {std::pair{"5", 2}, {"7", 4}, {"3", 1}}) {
    const Field f = Field::parse(name);
    const RsCode code = RsCode::full(f, d);
    const auto w = rs::encode(code, g.coeffs(f, code.dimension()));
    std::vector<std::vector<Elem>> lists;
    for (Elem v : w.values) lists.push_back({v});
    const auto inst = Instance::from_lists(f, lists);
    const auto dec = fourier::FourierCounter(code).decompose(inst);
    const double q = f.order();
    const double size = std::pow(q, d + 1);
    EXPECT_NEAR(dec.main_term, std::pow(1.0 / q, q), 1e-14 * std::pow(1.0 / q, q));
    EXPECT_NEAR(dec.count, 1.0, 1e-9);
    EXPECT_NEAR(dec.r.real(), 1.0 / size - std::pow(1.0 / q, q), 1e-12);
    EXPECT_NEAR(dec.r.imag(), 0.0, 1e-12);
  }
}

TEST(CountViaFourier, MatchesDirectCount) {
  Gen g(8);
  for (auto [name, d] : {std::pair{"5", 2}, {"7", 4}, {"5", 1}, {"2^3", 4}, {"3^2", 6}, {"11", 5}, {"2^2", 1}}) {
    const Field f = Field::parse(name);
    const RsCode code = RsCode::full(f, d);
    const fourier::FourierCounter counter(code);
    const double tol = 1e-6 * std::pow(static_cast<double>(f.order()), d + 1);
    for (int t = 0; t < 100; ++t) {
      // Dense lists make the direct count enumerate nearly all of C; keep big codes below 0.6.
      const double spread = code.size() <= 100'000 ? 0.7 : 0.3;
      const auto inst = g.instance(f, f.order(), 0.3 + spread * g.unit());
      const auto dec = counter.decompose(inst);
      const double direct = static_cast<double>(recovery::count(code, inst).count);
      ASSERT_NEAR(dec.count, direct, tol) << name << " d=" << d;
      ASSERT_NEAR(code.size() * (dec.main_term + dec.r.real()), dec.count, tol);
      ASSERT_LT(std::abs(dec.r.imag()) * static_cast<double>(code.size()), tol);
    }
  }
}

TEST(CountViaFourier, PuncturedCodes) {
  Gen g(9);
  const Field f = Field::parse("7");
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 3 + g.below(4);
    std::vector<Elem> pos;
    for (std::uint32_t i = 0; i < 7; ++i) pos.push_back(f.element(i));
    std::shuffle(pos.begin(), pos.end(), g.engine());
    pos.resize(n);
    const int d = static_cast<int>(g.below(n - 1));
    const RsCode code = RsCode::punctured(f, d, pos);
    Instance inst(f, pos);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint32_t z = 0; z < 7; ++z) {
        if (g.coin(0.6)) inst.insert(i, f.element(z));
      }
    }
    EXPECT_NEAR(fourier::count_via_fourier(code, inst), static_cast<double>(recovery::count(code, inst).count), 1e-6);
  }
}

TEST(CountViaFourier, Errors) {
  const Field f = Field::parse("2^4");
  EXPECT_RSLAB_ERROR(fourier::FourierCounter(RsCode::full(f, 2)), Errc::DualTooLarge);
  const fourier::FourierCounter counter(RsCode::full(Field::parse("5"), 2));
  EXPECT_RSLAB_ERROR(counter.decompose(Instance::full_length(Field::parse("7"))), Errc::MismatchedField);
}

TEST(SecondMoment, ExactSmallCase) {
  const RsCode code = RsCode::full(Field::parse("3"), 1);
  EXPECT_NEAR(fourier::expected_r_squared_exact(code, 1.0 / 3.0), 16.0 / 19683.0, 1e-15);
  EXPECT_EQ(fourier::expected_r_squared_exact(code, 0.0), 0.0);
  EXPECT_EQ(fourier::expected_r_squared_exact(code, 1.0), 0.0);
}

TEST(SecondMoment, ExactMatchesDualWordSum) {
  // Same quantity from the enumerated dual: sum over nonzero a of prod_i E|g_i^(a_i)|^2.
  for (auto [name, d] : {std::pair{"5", 2}, {"7", 4}, {"2^3", 5}}) {
    const Field f = Field::parse(name);
    const RsCode code = RsCode::full(f, d);
    const auto dual = span(f, rs::dual_code(code).code.basis, f.order());
    for (double p : {0.2, 0.5, 0.9}) {
      const double q = f.order();
      const double b = p * (1 - p) / q;
      const double a = p * p + b;
      double sum = 0;
      for (const auto& alpha : dual) {
        std::size_t w = 0;
        for (Elem e : alpha) w += e.is_zero() ? 0 : 1;
        if (w == 0) continue;
        sum += std::pow(a, static_cast<double>(f.order() - w)) * std::pow(b, static_cast<double>(w));
      }
      EXPECT_NEAR(fourier::expected_r_squared_exact(code, p) / sum, 1.0, 1e-10);
    }
  }
}

TEST(SecondMoment, MonteCarloMatchesExact) {
  const RsCode code = RsCode::full(Field::parse("3"), 1);
  const auto rep = fourier::fourier_check(code, 1.0 / 3.0, 100'000, 0xA5EED, 1);
  EXPECT_NEAR(rep.exact_r_squared, 16.0 / 19683.0, 1e-15);
  EXPECT_NEAR(rep.mean_r_squared, rep.exact_r_squared, 4 * rep.stderr_r_squared);
  EXPECT_LT(rep.max_count_error, 1e-9);
  for (auto [name, d, p] : {std::tuple{"5", 2, 0.5}, {"7", 4, 0.6}}) {
    const auto r = fourier::fourier_check(RsCode::full(Field::parse(name), d), p, 20'000, 3, 1);
    EXPECT_NEAR(r.mean_r_squared, r.exact_r_squared, 4 * r.stderr_r_squared) << name;
    EXPECT_LT(r.max_count_error, 1e-6 * std::pow(std::stod(name), d + 1));
  }
}

TEST(SecondMoment, PerCoefficientIdentities) {
  Gen g(10);
  for (const char* name : {"5", "2^4", "17"}) {
    const Field f = Field::parse(name);
    const CharacterTable table(f);
    const double q = f.order();
    for (int step = 1; step <= 9; ++step) {
      const double p = step / 10.0;
      stats::RunningMean at_zero;
      stats::RunningMean at_one;
      stats::RunningMean averaged;
      for (int t = 0; t < 20'000; ++t) {
        const auto s = fourier::indicator_spectrum(table, random_subset(g, f, p));
        at_zero.add(std::norm(s[0]));
        at_one.add(std::norm(s[1]));
        double avg = 0;
        for (std::size_t a = 1; a < s.size(); ++a) avg += std::norm(s[a]);
        averaged.add(avg / (q - 1));
      }
      const double e0 = p * p + p * (1 - p) / q;
      const double e1 = p * (1 - p) / q;
      EXPECT_NEAR(at_zero.mean(), e0, 4 * at_zero.stderr_of_mean()) << name << " p=" << p;
      EXPECT_NEAR(at_one.mean(), e1, 4 * at_one.stderr_of_mean()) << name << " p=" << p;
      EXPECT_NEAR(averaged.mean(), e1, 4 * averaged.stderr_of_mean()) << name << " p=" << p;
    }
  }
}

TEST(SecondMoment, CrossTermsVanish) {
  // E[M(a) conj M(b)] for distinct dual words a, b, with M(a) = prod_i g_i^(a_i).
  Gen g(11);
  const Field f = Field::parse("5");
  const RsCode code = RsCode::full(f, 2);
  const CharacterTable table(f);
  const auto dual = span(f, rs::dual_code(code).code.basis, 5);
  const double p = 0.5;
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 1}, {1, 2}, {3, 7}, {5, 24}};
  std::vector<stats::RunningMean> re(pairs.size());
  std::vector<stats::RunningMean> im(pairs.size());
  for (int t = 0; t < 40'000; ++t) {
    const auto inst = g.instance(f, 5, p);
    std::vector<fourier::Spectrum> spectra;
    for (std::size_t i = 0; i < 5; ++i) spectra.push_back(fourier::indicator_spectrum(table, inst, i));
    auto m = [&](const std::vector<Elem>& alpha) {
      Complex acc = 1.0;
      for (std::size_t i = 0; i < 5; ++i) acc *= spectra[i][alpha[i].index()];
      return acc;
    };
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const Complex v = m(dual[pairs[k].first]) * std::conj(m(dual[pairs[k].second]));
      re[k].add(v.real());
      im[k].add(v.imag());
    }
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    ASSERT_NE(dual[pairs[k].first], dual[pairs[k].second]);
    // The pair containing the zero word has mean p^5 * E[prod g^(b_i)] = 0 as well.
    EXPECT_NEAR(re[k].mean(), 0.0, 4 * re[k].stderr_of_mean()) << k;
    EXPECT_NEAR(im[k].mean(), 0.0, 4 * im[k].stderr_of_mean() + 1e-15) << k;
  }
}

TEST(MainTerm, Examples) {
  const Field f = Field::parse("2^4");
  Instance full = Instance::full_length(f);
  for (std::size_t i = 0; i < 16; ++i) full.fill(i);
  const auto s = fourier::main_term_statistic(full, 0.5, 1.0);
  EXPECT_EQ(s.value, 1.0);
  EXPECT_FALSE(s.below_threshold);
  Instance holey = full;
  for (std::uint32_t z = 0; z < 16; ++z) holey.erase(3, f.element(z));
  const auto h = fourier::main_term_statistic(holey, 0.5, 1.0);
  EXPECT_EQ(h.value, 0.0);
  EXPECT_TRUE(h.below_threshold);
  EXPECT_RSLAB_ERROR(fourier::main_term_statistic(Instance(f, {f.element(0)}), 0.5, 1.0), Errc::InvalidPositions);
}

TEST(MainTerm, BadEventIsRareAtCalibratedPoints) {
  for (auto [name, r, eps] : {std::tuple{"2^6", 0.5, 1.0}, {"3^4", 0.5, 1.0}, {"2^8", 0.5, 0.5}}) {
    const Field f = Field::parse(name);
    const double p = std::pow(static_cast<double>(f.order()), -r) * (1 + eps);
    int flagged = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
      const auto inst = randmodel::sample_instance(f, f.order(), randmodel::Iid{p}, {0x3A1, t});
      flagged += fourier::main_term_statistic(inst, r, eps).below_threshold ? 1 : 0;
    }
    EXPECT_LE(flagged, 50) << name;
  }
}

}  // namespace
}  // namespace rslab
