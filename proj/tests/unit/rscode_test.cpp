#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rslab/rscode.hpp"
#include "support.hpp"

namespace rslab {
namespace {

using gf::Elem;
using gf::Field;
using rs::BigInt;
using rs::RsCode;
using testing::Gen;

std::vector<Elem> elems(const Field& f, std::initializer_list<std::uint32_t> idx) {
  std::vector<Elem> out;
  for (auto i : idx) out.push_back(f.element(i));
  return out;
}

// Weight histogram by direct evaluation of every coefficient vector, without
// going through the library's enumerator.
std::map<std::size_t, std::uint64_t> weights_by_hand(const Field& f, int d, std::span<const Elem> positions) {
  const std::uint64_t q = f.order();
  const std::uint64_t total = testing::ipow(q, static_cast<unsigned>(d + 1));
  std::map<std::size_t, std::uint64_t> hist;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<Elem> c(static_cast<std::size_t>(d + 1));
    std::uint64_t rest = code;
    for (auto& e : c) {
      e = f.element(static_cast<std::uint32_t>(rest % q));
      rest /= q;
    }
    std::size_t w = 0;
    for (Elem x : positions) {
      Elem v = f.zero();
      Elem xp = f.one();
      for (Elem ci : c) {
        v = f.add(v, f.mul(ci, xp));
        xp = f.mul(xp, x);
      }
      w += v.is_zero() ? 0 : 1;
    }
    ++hist[w];
  }
  return hist;
}

std::vector<Elem> all_positions(const Field& f) {
  std::vector<Elem> out;
  for (std::uint32_t i = 0; i < f.order(); ++i) out.push_back(f.element(i));
  return out;
}

std::set<std::vector<std::uint32_t>> span_of(const Field& f, const std::vector<std::vector<Elem>>& basis, std::size_t n) {
  std::set<std::vector<std::uint32_t>> out;
  const std::uint64_t q = f.order();
  const std::uint64_t total = testing::ipow(q, static_cast<unsigned>(basis.size()));
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<Elem> v(n, f.zero());
    std::uint64_t rest = code;
    for (const auto& row : basis) {
      const Elem c = f.element(static_cast<std::uint32_t>(rest % q));
      rest /= q;
      for (std::size_t i = 0; i < n; ++i) v[i] = f.add(v[i], f.mul(c, row[i]));
    }
    std::vector<std::uint32_t> idx;
    for (Elem e : v) idx.push_back(e.index());
    out.insert(idx);
  }
  return out;
}

TEST(Encode, Examples) {
  const Field f3 = Field::parse("3");
  const auto c = rs::encode(RsCode::full(f3, 1), elems(f3, {1, 1}));
  EXPECT_EQ(c.values, elems(f3, {1, 2, 0}));
  EXPECT_EQ(c.weight(), 2u);

  const Field f5 = Field::parse("5");
  EXPECT_EQ(rs::encode(RsCode::full(f5, 0), elems(f5, {3})).values, elems(f5, {3, 3, 3, 3, 3}));
  const auto zero = rs::encode(RsCode::full(f5, 3), elems(f5, {0, 0, 0, 0}));
  EXPECT_EQ(zero.weight(), 0u);
  EXPECT_RSLAB_ERROR(rs::encode(RsCode::full(f5, 1), elems(f5, {1, 2, 3})), Errc::WrongCoefficientCount);
}

TEST(Interpolate, Examples) {
  const Field f3 = Field::parse("3");
  const std::vector<rs::Point> two{{f3.element(0), f3.element(1)}, {f3.element(1), f3.element(2)}};
  EXPECT_EQ(rs::interpolate(f3, two), elems(f3, {1, 1}));
  const std::vector<rs::Point> one{{f3.element(0), f3.element(2)}};
  EXPECT_EQ(rs::interpolate(f3, one), elems(f3, {2}));

  const Field f5 = Field::parse("5");
  const std::vector<rs::Point> sq{{f5.element(0), f5.element(0)}, {f5.element(1), f5.element(1)},
                                  {f5.element(2), f5.element(4)}};
  EXPECT_EQ(rs::interpolate(f5, sq), elems(f5, {0, 0, 1}));
  const std::vector<rs::Point> dup{{f5.element(1), f5.element(0)}, {f5.element(1), f5.element(2)}};
  EXPECT_RSLAB_ERROR(rs::interpolate(f5, dup), Errc::DuplicateX);
}

TEST(Interpolate, InvertsEncodeOnSmallCodes) {
  for (const char* name : {"2", "3", "2^2", "5", "7", "2^3", "3^2"}) {
    const Field f = Field::parse(name);
    for (int d = 0; d < static_cast<int>(f.order()); ++d) {
      if (testing::ipow(f.order(), static_cast<unsigned>(d + 1)) > 10'000) break;
      const RsCode code = RsCode::full(f, d);
      rs::for_each_codeword(code, [&](const rs::Codeword& w) {
        std::vector<rs::Point> pts;
        for (int i = 0; i <= d; ++i) pts.emplace_back(code.positions()[static_cast<std::size_t>(i)], w.values[static_cast<std::size_t>(i)]);
        ASSERT_EQ(rs::interpolate(f, pts), w.coeffs);
      });
    }
  }
}

TEST(Interpolate, ThroughArbitraryPointsInLargeField) {
  const Field f = Field::parse("2^12");
  Gen g(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + g.below(8);
    std::set<std::uint32_t> xs;
    while (xs.size() < k) xs.insert(g.elem(f).index());
    std::vector<rs::Point> pts;
    for (auto x : xs) pts.emplace_back(f.element(x), g.elem(f));
    const auto c = rs::interpolate(f, pts);
    ASSERT_EQ(c.size(), k);
    for (const auto& [x, y] : pts) ASSERT_EQ(rs::evaluate(f, c, x), y);
  }
}

TEST(Enumerate, CountsAndOrder) {
  const Field f2 = Field::parse("2");
  std::vector<std::vector<Elem>> seen;
  rs::for_each_codeword(RsCode::full(f2, 1), [&](const rs::Codeword& w) { seen.push_back(w.values); });
  // c_0 varies fastest: 0, 1, x, 1 + x.
  const std::vector<std::vector<Elem>> expected{elems(f2, {0, 0}), elems(f2, {1, 1}), elems(f2, {0, 1}), elems(f2, {1, 0})};
  EXPECT_EQ(seen, expected);

  std::size_t n3 = 0;
  rs::for_each_codeword(RsCode::full(Field::parse("3"), 0), [&](const rs::Codeword&) { ++n3; });
  EXPECT_EQ(n3, 3u);
  std::set<std::vector<Elem>> distinct;
  rs::for_each_codeword(RsCode::full(Field::parse("5"), 1), [&](const rs::Codeword& w) { distinct.insert(w.values); });
  EXPECT_EQ(distinct.size(), 25u);
}

TEST(Enumerate, GuardRefusesLargeCodes) {
  const RsCode big = RsCode::full(Field::parse("2^5"), 5);  // 32^6 > 10^7
  EXPECT_RSLAB_ERROR(rs::checked_enumeration_size(big), Errc::EnumerationTooLarge);
  EXPECT_RSLAB_ERROR(rs::for_each_codeword(big, [](const rs::Codeword&) {}), Errc::EnumerationTooLarge);
  EXPECT_EQ(rs::checked_enumeration_size(RsCode::full(Field::parse("2^5"), 3)), 1u << 20);
}

TEST(Code, InvalidShapes) {
  const Field f = Field::parse("5");
  EXPECT_RSLAB_ERROR(RsCode::full(f, 5), Errc::InvalidDegree);
  EXPECT_RSLAB_ERROR(RsCode::full(f, -1), Errc::InvalidDegree);
  EXPECT_RSLAB_ERROR(RsCode::punctured(f, 2, elems(f, {0, 1})), Errc::InvalidDegree);
  EXPECT_RSLAB_ERROR(RsCode::punctured(f, 0, elems(f, {1, 1})), Errc::InvalidPositions);
}

TEST(WeightDistribution, Examples) {
  const auto w51 = rs::weight_distribution_exact(RsCode::full(Field::parse("5"), 1));
  EXPECT_EQ(w51.nonzero(), (std::map<std::size_t, BigInt>{{0, 1}, {4, 20}, {5, 4}}));
  const auto w31 = rs::weight_distribution_exact(RsCode::full(Field::parse("3"), 1));
  EXPECT_EQ(w31.nonzero(), (std::map<std::size_t, BigInt>{{0, 1}, {2, 6}, {3, 2}}));
  for (const char* name : {"2", "3", "2^2", "7", "2^4", "31"}) {
    const Field f = Field::parse(name);
    const auto w = rs::weight_distribution_exact(RsCode::full(f, 0));
    EXPECT_EQ(w.nonzero(), (std::map<std::size_t, BigInt>{{0, 1}, {f.order(), f.order() - 1}})) << name;
  }
  EXPECT_RSLAB_ERROR(rs::weight_distribution_exact(RsCode::punctured(Field::parse("5"), 1, elems(Field::parse("5"), {0, 1, 2}))),
                     Errc::PuncturedNotSupported);
}

TEST(WeightDistribution, FormulaMatchesHandEnumeration) {
  for (const char* name : {"2", "3", "2^2", "5", "7", "2^3", "3^2", "11", "13", "2^4"}) {
    const Field f = Field::parse(name);
    const auto pos = all_positions(f);
    for (int d = 0; d <= 3 && d < static_cast<int>(f.order()); ++d) {
      if (testing::ipow(f.order(), static_cast<unsigned>(d + 1)) > 100'000) break;
      const RsCode code = RsCode::full(f, d);
      const auto exact = rs::weight_distribution_exact(code);
      const auto hand = weights_by_hand(f, d, pos);
      std::map<std::size_t, BigInt> hand_big(hand.begin(), hand.end());
      ASSERT_EQ(exact.nonzero(), hand_big) << name << " d=" << d;
      EXPECT_EQ(rs::weight_distribution_brute_force(code), exact);
      EXPECT_EQ(exact.total(), BigInt(testing::ipow(f.order(), static_cast<unsigned>(d + 1))));
      // MDS distance: nothing strictly between 0 and q - d.
      for (std::size_t w = 1; w + static_cast<std::size_t>(d) < f.order(); ++w) EXPECT_EQ(exact[w], 0);
      for (int i = 0; i <= d; ++i) {
        EXPECT_GE(rs::weight_bound_crude(f.order(), d, i), exact[f.order() - static_cast<std::size_t>(i)]);
      }
    }
  }
}

TEST(WeightDistribution, HighDegreeFormulaTotals) {
  // Beyond enumeration the closed form must still sum to q^{d+1} with W_0 = 1.
  for (std::uint64_t q : {17u, 64u, 256u}) {
    for (std::size_t k : {std::size_t{1}, std::size_t{5}, std::size_t{q / 2}, std::size_t{q}}) {
      const auto w = rs::mds_weight_distribution(q, q, k);
      BigInt expected = 1;
      for (std::size_t i = 0; i < k; ++i) expected *= q;
      EXPECT_EQ(w.total(), expected);
      EXPECT_EQ(w[0], 1);
      for (std::size_t i = 1; i + k <= q; ++i) EXPECT_EQ(w[i], 0) << q << " " << k << " " << i;
    }
  }
}

TEST(WeightBounds, Examples) {
  EXPECT_EQ(rs::weight_bound_crude(5, 1, 1), 25);
  EXPECT_EQ(rs::weight_bound_crude(5, 1, 0), 25);
  EXPECT_EQ(rs::weight_bound_crude(7, 2, 2), 172);  // ceil(343 / 2)
  EXPECT_EQ(rs::punctured_weight_bound(5, 2, 4, 1), 20);
  EXPECT_EQ(rs::punctured_weight_bound(5, 2, 4, 0), 25);
  EXPECT_RSLAB_ERROR(rs::weight_bound_crude(5, 1, 2), Errc::ParameterOutOfRange);
  EXPECT_RSLAB_ERROR(rs::punctured_weight_bound(5, 2, 6, 0), Errc::ParameterOutOfRange);
}

TEST(WeightBounds, PuncturedBoundDominatesEnumeration) {
  Gen g(21);
  for (const char* name : {"5", "7", "2^3", "3^2"}) {
    const Field f = Field::parse(name);
    for (int trial = 0; trial < 12; ++trial) {
      const std::size_t n = 1 + g.below(f.order());
      auto pos = all_positions(f);
      std::shuffle(pos.begin(), pos.end(), g.engine());
      pos.resize(n);
      const int d = static_cast<int>(g.below(std::min<std::size_t>(n, 3)));
      const auto hist = weights_by_hand(f, d, pos);
      const RsCode code = RsCode::punctured(f, d, pos);
      const auto brute = rs::weight_distribution_brute_force(code);
      for (std::size_t i = 0; i < code.dimension(); ++i) {
        const auto it = hist.find(n - i);
        const std::uint64_t count = it == hist.end() ? 0 : it->second;
        EXPECT_EQ(brute[n - i], count);
        EXPECT_GE(rs::punctured_weight_bound(f.order(), code.dimension(), n, i), count);
      }
    }
  }
}

TEST(Dual, Rs31IsConstants) {
  const Field f = Field::parse("3");
  const auto dual = rs::dual_code(RsCode::full(f, 1));
  ASSERT_TRUE(dual.as_rs.has_value());
  EXPECT_EQ(dual.as_rs->degree(), 0);
  const auto words = span_of(f, dual.code.basis, 3);
  EXPECT_EQ(words, (std::set<std::vector<std::uint32_t>>{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}));
}

TEST(Dual, FullLengthDimensionsOrthogonalityAndBiduality) {
  for (const char* name : {"2", "3", "2^2", "5", "7"}) {
    const Field f = Field::parse(name);
    const std::size_t q = f.order();
    for (int d = 0; d < static_cast<int>(q); ++d) {
      const RsCode code = RsCode::full(f, d);
      const auto dual = rs::dual_code(code);
      EXPECT_EQ(code.dimension() + dual.code.dimension(), q);
      EXPECT_TRUE(rs::orthogonal(rs::generator(code), dual.code));
      // Exhaustive orthogonality against every codeword of C.
      const auto dual_words = span_of(f, dual.code.basis, q);
      rs::for_each_codeword(code, [&](const rs::Codeword& w) {
        for (const auto& v : dual_words) {
          Elem s = f.zero();
          for (std::size_t i = 0; i < q; ++i) s = f.add(s, f.mul(w.values[i], f.element(v[i])));
          ASSERT_TRUE(s.is_zero());
        }
      });
      if (!dual.as_rs) {
        EXPECT_EQ(d, static_cast<int>(q) - 1);
        EXPECT_EQ(dual.code.dimension(), 0u);
        continue;
      }
      EXPECT_EQ(dual.as_rs->degree(), static_cast<int>(q) - d - 2);
      // dual(dual(C)) = C as codeword sets.
      const auto back = rs::dual_code(*dual.as_rs);
      EXPECT_EQ(span_of(f, back.code.basis, q), span_of(f, rs::generator(code).basis, q));
    }
  }
}

TEST(Dual, DegreeQMinusDMinus1IsNotOrthogonal) {
  // The dimension count (d+1) + (q-d) = q+1 already rules it out; check directly at q=3, d=1.
  const Field f = Field::parse("3");
  const RsCode code = RsCode::full(f, 1);
  const RsCode wrong = RsCode::full(f, 1);  // q - d - 1 = 1
  EXPECT_FALSE(rs::orthogonal(rs::generator(code), rs::generator(wrong)));
}

TEST(Dual, PuncturedNullspaceDual) {
  Gen g(9);
  for (const char* name : {"5", "7", "2^3"}) {
    const Field f = Field::parse(name);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 2 + g.below(f.order() - 2);
      auto pos = all_positions(f);
      std::shuffle(pos.begin(), pos.end(), g.engine());
      pos.resize(n);
      const int d = static_cast<int>(g.below(std::min<std::size_t>(n - 1, 3)));
      const RsCode code = RsCode::punctured(f, d, pos);
      const auto dual = rs::dual_code(code);
      EXPECT_FALSE(dual.as_rs.has_value());
      EXPECT_EQ(dual.code.dimension(), n - code.dimension());
      EXPECT_TRUE(rs::orthogonal(rs::generator(code), dual.code));
      // Biduality through a second nullspace.
      gf::Matrix m(f, dual.code.basis);
      const auto back = gf::nullspace(f, m);
      EXPECT_EQ(span_of(f, back, n), span_of(f, rs::generator(code).basis, n));
      // The dual is MDS with the complementary dimension.
      const auto rep = rs::compare_punctured_dual(code);
      EXPECT_EQ(rep.dual_dimension, n - code.dimension());
      EXPECT_TRUE(rep.weight_distributions_match);
      EXPECT_EQ(rs::weight_distribution_brute_force(dual.code), rs::mds_weight_distribution(f.order(), n, n - code.dimension()));
    }
  }
}

TEST(Dual, PuncturedDualIsUsuallyNotPlainRs) {
  // GF(7), positions {0,1,3}, d=0: the dual is a GRS code with nontrivial multipliers.
  const Field f = Field::parse("7");
  const auto rep = rs::compare_punctured_dual(RsCode::punctured(f, 0, elems(f, {0, 1, 3})));
  EXPECT_EQ(rep.plain_degree, 1);
  EXPECT_TRUE(rep.weight_distributions_match);
  EXPECT_FALSE(rep.codes_equal);
}

TEST(BigIntLog, Matches) {
  EXPECT_NEAR(static_cast<double>(rs::natural_log(BigInt(1))), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(rs::natural_log(BigInt(1000))), std::log(1000.0), 1e-12);
  BigInt big = 1;
  for (int i = 0; i < 300; ++i) big *= 7;
  EXPECT_NEAR(static_cast<double>(rs::natural_log(big)), 300 * std::log(7.0), 1e-9);
  EXPECT_TRUE(std::isinf(static_cast<double>(rs::natural_log(BigInt(0)))));
}

}  // namespace
}  // namespace rslab
