#include "rslab/rscode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "rslab/error.hpp"

namespace rslab::rs {
namespace {

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t acc = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (acc > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    acc *= base;
  }
  return acc;
}

BigInt big_pow(std::uint64_t base, std::size_t exp) {
  BigInt acc = 1;
  for (std::size_t i = 0; i < exp; ++i) acc *= base;
  return acc;
}

BigInt binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  BigInt acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc *= (n - r + i);
    acc /= i;
  }
  return acc;
}

BigInt factorial(std::uint64_t n) {
  BigInt acc = 1;
  for (std::uint64_t i = 2; i <= n; ++i) acc *= i;
  return acc;
}

BigInt ceil_div(const BigInt& num, const BigInt& den) {
  BigInt quot = num / den;
  if (quot * den != num) quot += 1;
  return quot;
}

}  // namespace

RsCode RsCode::full(gf::Field field, int degree) {
  const auto q = field.order();
  if (degree < 0 || static_cast<std::uint64_t>(degree) >= q) {
    throw Error(Errc::InvalidDegree, "need 0 <= d < q, got d = " + std::to_string(degree));
  }
  std::vector<Elem> positions(q);
  for (std::uint32_t i = 0; i < q; ++i) positions[i] = Elem(i);
  return RsCode(std::move(field), degree, std::move(positions), true);
}

RsCode RsCode::punctured(gf::Field field, int degree, std::vector<Elem> positions) {
  std::set<Elem> seen;
  for (Elem e : positions) {
    if (!field.contains(e)) throw Error(Errc::ElementOutOfRange, "position outside field");
    if (!seen.insert(e).second) throw Error(Errc::InvalidPositions, "repeated position");
  }
  if (degree < 0 || static_cast<std::size_t>(degree) >= positions.size()) {
    throw Error(Errc::InvalidDegree, "need 0 <= d < n, got d = " + std::to_string(degree) +
                                         ", n = " + std::to_string(positions.size()));
  }
  bool full = positions.size() == field.order();
  for (std::size_t i = 0; full && i < positions.size(); ++i) full = positions[i].index() == i;
  return RsCode(std::move(field), degree, std::move(positions), full);
}

std::uint64_t RsCode::size() const { return saturating_pow(field_.order(), dimension()); }

std::size_t Codeword::weight() const {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](Elem e) { return !e.is_zero(); }));
}

Elem evaluate(const gf::Field& field, std::span<const Elem> coeffs, Elem x) {
  Elem acc = field.zero();
  for (std::size_t j = coeffs.size(); j-- > 0;) acc = field.add(field.mul(acc, x), coeffs[j]);
  return acc;
}

Codeword encode(const RsCode& code, std::span<const Elem> coeffs) {
  if (coeffs.size() != code.dimension()) {
    throw Error(Errc::WrongCoefficientCount, "expected " + std::to_string(code.dimension()) +
                                                 " coefficients, got " + std::to_string(coeffs.size()));
  }
  const auto& f = code.field();
  for (Elem c : coeffs) {
    if (!f.contains(c)) throw Error(Errc::ElementOutOfRange, "coefficient outside field");
  }
  Codeword w;
  w.coeffs.assign(coeffs.begin(), coeffs.end());
  w.values.reserve(code.length());
  for (Elem x : code.positions()) w.values.push_back(evaluate(f, coeffs, x));
  return w;
}

Coeffs interpolate(const gf::Field& field, std::span<const Point> points) {
  const std::size_t n = points.size();
  if (n == 0) throw Error(Errc::ParameterOutOfRange, "interpolation needs at least one point");
  std::set<Elem> xs;
  for (const auto& [x, y] : points) {
    if (!field.contains(x) || !field.contains(y)) throw Error(Errc::ElementOutOfRange, "point outside field");
    if (!xs.insert(x).second) throw Error(Errc::DuplicateX, "repeated x = " + std::to_string(x.index()));
  }

  // Newton divided differences, then expand the nested form.
  std::vector<Elem> dd(n);
  for (std::size_t i = 0; i < n; ++i) dd[i] = points[i].second;
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      const Elem num = field.sub(dd[i], dd[i - 1]);
      const Elem den = field.sub(points[i].first, points[i - level].first);
      dd[i] = field.div(num, den);
    }
  }
  Coeffs poly{dd[n - 1]};
  for (std::size_t j = n - 1; j-- > 0;) {
    // poly <- poly * (x - x_j) + dd[j]
    const Elem root = points[j].first;
    Coeffs next(poly.size() + 1, field.zero());
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] = field.add(next[i + 1], poly[i]);
      next[i] = field.sub(next[i], field.mul(root, poly[i]));
    }
    next[0] = field.add(next[0], dd[j]);
    poly = std::move(next);
  }
  poly.resize(n, field.zero());
  return poly;
}

std::uint64_t checked_enumeration_size(const RsCode& code, std::uint64_t limit) {
  const std::uint64_t size = code.size();
  if (size > limit) {
    throw Error(Errc::EnumerationTooLarge,
                "q^{d+1} = " + std::to_string(size) + " exceeds " + std::to_string(limit));
  }
  return size;
}

CodewordEnumerator::CodewordEnumerator(const RsCode& code) : code_(&code) {
  checked_enumeration_size(code);
  const auto& f = code.field();
  const std::size_t n = code.length();
  powers_.assign(code.dimension(), std::vector<Elem>(n, f.one()));
  for (std::size_t j = 1; j < code.dimension(); ++j) {
    for (std::size_t i = 0; i < n; ++i) powers_[j][i] = f.mul(powers_[j - 1][i], code.positions()[i]);
  }
  current_.values.assign(n, f.zero());
  current_.coeffs.assign(code.dimension(), f.zero());
}

bool CodewordEnumerator::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    return true;
  }
  const auto& f = code_->field();
  const std::uint32_t q = f.order();
  for (std::size_t j = 0; j < current_.coeffs.size(); ++j) {
    const Elem old = current_.coeffs[j];
    const Elem updated(old.index() + 1 == q ? 0 : old.index() + 1);
    const Elem delta = f.sub(updated, old);
    current_.coeffs[j] = updated;
    for (std::size_t i = 0; i < current_.values.size(); ++i) {
      current_.values[i] = f.add(current_.values[i], f.mul(delta, powers_[j][i]));
    }
    if (!updated.is_zero()) return true;
  }
  done_ = true;
  return false;
}

void for_each_codeword(const RsCode& code, const std::function<void(const Codeword&)>& fn) {
  CodewordEnumerator it(code);
  while (it.next()) fn(it.current());
}

BigInt WeightDistribution::total() const {
  BigInt acc = 0;
  for (const auto& c : counts_) acc += c;
  return acc;
}

std::map<std::size_t, BigInt> WeightDistribution::nonzero() const {
  std::map<std::size_t, BigInt> out;
  for (std::size_t w = 0; w < counts_.size(); ++w) {
    if (counts_[w] != 0) out.emplace(w, counts_[w]);
  }
  return out;
}

long double natural_log(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<long double>::infinity();
  const auto bits = boost::multiprecision::msb(x);
  if (bits < 60) return std::log(x.convert_to<long double>());
  const auto shift = bits - 60;
  const BigInt top = x >> shift;
  return std::log(top.convert_to<long double>()) + static_cast<long double>(shift) * std::log(2.0L);
}

WeightDistribution mds_weight_distribution(std::uint64_t q, std::size_t n, std::size_t k) {
  if (k > n) throw Error(Errc::ParameterOutOfRange, "dimension exceeds length");
  WeightDistribution wd(n);
  wd[0] = 1;
  for (std::size_t i = 0; i < k; ++i) {
    BigInt sum = 0;
    for (std::size_t j = 0; j + i < k; ++j) {
      BigInt term = binomial(n - i, j) * (big_pow(q, k - i - j) - 1);
      if (j % 2 == 0) {
        sum += term;
      } else {
        sum -= term;
      }
    }
    wd[n - i] = binomial(n, i) * sum;
  }
  return wd;
}

WeightDistribution weight_distribution_exact(const RsCode& code) {
  if (!code.is_full_length()) {
    throw Error(Errc::PuncturedNotSupported, "closed form covers full-length codes; use brute force");
  }
  return mds_weight_distribution(code.field().order(), code.length(), code.dimension());
}

WeightDistribution weight_distribution_brute_force(const RsCode& code) {
  std::vector<std::uint64_t> counts(code.length() + 1, 0);
  for_each_codeword(code, [&](const Codeword& w) { ++counts[w.weight()]; });
  WeightDistribution wd(code.length());
  for (std::size_t w = 0; w < counts.size(); ++w) wd[w] = counts[w];
  return wd;
}

BigInt weight_bound_crude(std::uint64_t q, int d, int i) {
  if (d < 0 || i < 0 || i > d) throw Error(Errc::ParameterOutOfRange, "need 0 <= i <= d");
  return ceil_div(big_pow(q, static_cast<std::size_t>(d) + 1), factorial(static_cast<std::uint64_t>(i)));
}

BigInt punctured_weight_bound(std::uint64_t q, std::size_t k, std::size_t n, std::size_t i) {
  if (!(i < k && k <= n && n <= q)) throw Error(Errc::ParameterOutOfRange, "need i < k <= n <= q");
  return ceil_div(big_pow(q, k - i) * big_pow(n, i), factorial(i));
}

LinearCode generator(const RsCode& code) {
  const auto& f = code.field();
  LinearCode g{f, code.length(), {}};
  std::vector<Elem> row(code.length(), f.one());
  for (std::size_t j = 0; j < code.dimension(); ++j) {
    g.basis.push_back(row);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = f.mul(row[i], code.positions()[i]);
  }
  return g;
}

bool orthogonal(const LinearCode& a, const LinearCode& b) {
  if (!(a.field == b.field) || a.length != b.length) {
    throw Error(Errc::MismatchedField, "codes over different fields or lengths");
  }
  for (const auto& u : a.basis) {
    for (const auto& v : b.basis) {
      if (!gf::dot(a.field, u, v).is_zero()) return false;
    }
  }
  return true;
}

void for_each_codeword(const LinearCode& code, std::uint64_t limit,
                       const std::function<void(std::span<const Elem>)>& fn) {
  const auto& f = code.field;
  const std::uint64_t size = saturating_pow(f.order(), code.dimension());
  if (size > limit) {
    throw Error(Errc::EnumerationTooLarge,
                "q^dim = " + std::to_string(size) + " exceeds " + std::to_string(limit));
  }
  std::vector<Elem> coeffs(code.dimension(), f.zero());
  std::vector<Elem> word(code.length, f.zero());
  fn(word);
  const std::uint32_t q = f.order();
  for (;;) {
    std::size_t j = 0;
    for (; j < coeffs.size(); ++j) {
      const Elem old = coeffs[j];
      const Elem updated(old.index() + 1 == q ? 0 : old.index() + 1);
      const Elem delta = f.sub(updated, old);
      coeffs[j] = updated;
      for (std::size_t i = 0; i < word.size(); ++i) {
        word[i] = f.add(word[i], f.mul(delta, code.basis[j][i]));
      }
      if (!updated.is_zero()) break;
    }
    if (j == coeffs.size()) return;
    fn(word);
  }
}

WeightDistribution weight_distribution_brute_force(const LinearCode& code, std::uint64_t limit) {
  std::vector<std::uint64_t> counts(code.length + 1, 0);
  for_each_codeword(code, limit, [&](std::span<const Elem> w) {
    ++counts[static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](Elem e) { return !e.is_zero(); }))];
  });
  WeightDistribution wd(code.length);
  for (std::size_t w = 0; w < counts.size(); ++w) wd[w] = counts[w];
  return wd;
}

DualCode dual_code(const RsCode& code) {
  const auto& f = code.field();
  const LinearCode gen = generator(code);
  DualCode out{LinearCode{f, code.length(), {}}, std::nullopt};
  if (code.is_full_length()) {
    const int dual_degree = static_cast<int>(f.order()) - code.degree() - 2;
    if (dual_degree >= 0) {
      out.as_rs = RsCode::full(f, dual_degree);
      out.code = generator(*out.as_rs);
    }
  } else {
    gf::Matrix m(f, gen.basis);
    out.code.basis = gf::nullspace(f, m);
  }
  if (!orthogonal(gen, out.code) || gen.dimension() + out.code.dimension() != code.length()) {
    throw std::logic_error("dual code failed orthogonality or dimension check");
  }
  return out;
}

PuncturedDualReport compare_punctured_dual(const RsCode& code, std::uint64_t limit) {
  const auto& f = code.field();
  const LinearCode gen = generator(code);
  LinearCode dual{f, code.length(), gf::nullspace(f, gf::Matrix(f, gen.basis))};

  PuncturedDualReport report;
  report.dual_dimension = dual.dimension();
  report.plain_degree = static_cast<int>(code.length()) - code.degree() - 2;
  if (report.plain_degree < 0) {
    report.weight_distributions_match = true;
    report.codes_equal = true;
    return report;
  }
  const RsCode plain = RsCode::punctured(f, report.plain_degree,
                                         std::vector<Elem>(code.positions().begin(), code.positions().end()));
  const LinearCode plain_gen = generator(plain);
  report.weight_distributions_match =
      weight_distribution_brute_force(dual, limit) == weight_distribution_brute_force(plain_gen, limit);

  std::vector<std::vector<Elem>> stacked = dual.basis;
  stacked.insert(stacked.end(), plain_gen.basis.begin(), plain_gen.basis.end());
  report.codes_equal = plain_gen.dimension() == dual.dimension() &&
                       gf::rank(gf::Matrix(f, stacked)) == dual.dimension();
  return report;
}

}  // namespace rslab::rs
