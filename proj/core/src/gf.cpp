#include "rslab/gf.hpp"

#include <algorithm>
#include <charconv>

#include "rslab/error.hpp"

namespace rslab::gf {
namespace {

using Poly = std::vector<std::uint32_t>;

// Remainder of `a` modulo monic `m` over GF(p); both low-to-high.
Poly poly_rem(Poly a, std::span<const std::uint32_t> m, std::uint32_t p) {
  const std::size_t dm = m.size() - 1;
  while (!a.empty() && a.back() == 0) a.pop_back();
  while (a.size() > dm) {
    const std::uint32_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      const std::uint64_t sub = static_cast<std::uint64_t>(lead) * m[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

// Product of two residues (length <= k) reduced modulo the degree-k modulus.
Poly mul_mod(const Poly& a, const Poly& b, std::span<const std::uint32_t> m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = static_cast<std::uint32_t>(
          (prod[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    }
  }
  return poly_rem(std::move(prod), m, p);
}

Poly index_to_poly(std::uint32_t index, std::uint32_t p, std::uint32_t k) {
  Poly c(k, 0);
  for (std::uint32_t i = 0; i < k; ++i) {
    c[i] = index % p;
    index /= p;
  }
  while (!c.empty() && c.back() == 0) c.pop_back();
  return c;
}

std::uint32_t poly_to_index(const Poly& c, std::uint32_t p) {
  std::uint32_t index = 0;
  for (std::size_t i = c.size(); i-- > 0;) index = index * p + c[i];
  return index;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

Poly poly_pow(Poly base, std::uint64_t e, std::span<const std::uint32_t> m, std::uint32_t p) {
  Poly acc{1};
  while (e > 0) {
    if (e & 1) acc = mul_mod(acc, base, m, p);
    base = mul_mod(base, base, m, p);
    e >>= 1;
  }
  return acc;
}

}  // namespace

FieldSpec FieldSpec::parse(std::string_view text) {
  auto parse_uint = [&](std::string_view s) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(Errc::InvalidFieldSpec, "expected \"p^k\", got \"" + std::string(text) + "\"");
    }
    return v;
  };
  FieldSpec spec;
  const auto caret = text.find('^');
  if (caret == std::string_view::npos) {
    // A bare order q: split prime powers, leave anything else for Field to reject.
    const std::uint32_t q = parse_uint(text);
    spec.p = q;
    spec.k = 1;
    for (std::uint64_t f = 2; f * f <= q; ++f) {
      if (q % f != 0) continue;
      std::uint32_t rest = q;
      std::uint32_t k = 0;
      while (rest % f == 0) {
        rest /= f;
        ++k;
      }
      if (rest == 1) {
        spec.p = static_cast<std::uint32_t>(f);
        spec.k = k;
      }
      break;
    }
  } else {
    spec.p = parse_uint(text.substr(0, caret));
    spec.k = parse_uint(text.substr(caret + 1));
  }
  return spec;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

bool is_irreducible(std::span<const std::uint32_t> poly, std::uint32_t p) {
  if (poly.size() < 2 || poly.back() == 0) return false;
  const std::size_t deg = poly.size() - 1;
  const Poly target(poly.begin(), poly.end());
  for (std::size_t e = 1; e <= deg / 2; ++e) {
    // Monic divisors of degree e: enumerate the e low coefficients.
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < e; ++i) count *= p;
    Poly divisor(e + 1, 0);
    divisor[e] = 1;
    for (std::uint64_t m = 0; m < count; ++m) {
      std::uint64_t r = m;
      for (std::size_t i = 0; i < e; ++i) {
        divisor[i] = static_cast<std::uint32_t>(r % p);
        r /= p;
      }
      if (poly_rem(target, divisor, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, std::uint32_t k) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < k; ++i) count *= p;
  Poly candidate(k + 1, 0);
  candidate[k] = 1;
  for (std::uint64_t m = 0; m < count; ++m) {
    std::uint64_t r = m;
    for (std::uint32_t i = 0; i < k; ++i) {
      candidate[i] = static_cast<std::uint32_t>(r % p);
      r /= p;
    }
    if (is_irreducible(candidate, p)) return candidate;
  }
  throw Error(Errc::ReducibleModulus, "no irreducible polynomial found");
}

Field::Field(FieldSpec spec) {
  if (!is_prime(spec.p)) {
    throw Error(Errc::CompositeCharacteristic, std::to_string(spec.p) + " is not prime");
  }
  if (spec.k == 0) throw Error(Errc::InvalidFieldSpec, "extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < spec.k; ++i) {
    q *= spec.p;
    if (q > kMaxOrder) {
      throw Error(Errc::FieldTooLarge, "field order exceeds 2^20");
    }
  }

  auto t = std::make_shared<Tables>();
  t->p = spec.p;
  t->k = spec.k;
  t->q = static_cast<std::uint32_t>(q);

  if (spec.modulus.empty()) {
    t->modulus = smallest_irreducible(spec.p, spec.k);
  } else {
    if (spec.modulus.size() != spec.k + 1 || spec.modulus.back() != 1) {
      throw Error(Errc::InvalidFieldSpec, "modulus must be monic of degree k");
    }
    for (auto c : spec.modulus) {
      if (c >= spec.p) throw Error(Errc::InvalidFieldSpec, "modulus coefficient out of range");
    }
    if (!is_irreducible(spec.modulus, spec.p)) {
      throw Error(Errc::ReducibleModulus, "modulus is reducible over GF(" + std::to_string(spec.p) + ")");
    }
    t->modulus = spec.modulus;
  }

  const std::uint32_t p = t->p;
  const std::uint32_t k = t->k;
  const std::span<const std::uint32_t> m = t->modulus;

  t->neg_table.resize(t->q);
  for (std::uint32_t a = 0; a < t->q; ++a) {
    Poly c = index_to_poly(a, p, k);
    for (auto& x : c) x = (p - x) % p;
    t->neg_table[a] = poly_to_index(c, p);
  }

  // Multiplicative group: find a generator, then tabulate exp/log.
  const std::uint32_t order = t->q - 1;
  t->log.assign(t->q, 0);
  t->exp.assign(2 * static_cast<std::size_t>(std::max<std::uint32_t>(order, 1)), 1);
  if (order >= 1) {
    const auto factors = prime_factors(order);
    std::uint32_t gen = 1;
    for (std::uint32_t g = (order == 1 ? 1 : 2); g < t->q; ++g) {
      const Poly gp = index_to_poly(g, p, k);
      bool primitive = true;
      for (auto f : factors) {
        if (poly_pow(gp, order / f, m, p) == Poly{1}) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        gen = g;
        break;
      }
    }
    const Poly gp = index_to_poly(gen, p, k);
    Poly cur{1};
    for (std::uint32_t e = 0; e < order; ++e) {
      const std::uint32_t idx = poly_to_index(cur, p);
      t->exp[e] = idx;
      t->exp[e + order] = idx;
      t->log[idx] = e;
      if (k == 1) {
        cur = Poly{static_cast<std::uint32_t>(static_cast<std::uint64_t>(idx) * gen % p)};
      } else {
        cur = mul_mod(cur, gp, m, p);
      }
    }
  }

  if (t->q <= 256) {
    const std::uint32_t qq = t->q;
    t->add_table.resize(static_cast<std::size_t>(qq) * qq);
    t->mul_table.resize(static_cast<std::size_t>(qq) * qq);
    for (std::uint32_t a = 0; a < qq; ++a) {
      const Poly pa = index_to_poly(a, p, k);
      for (std::uint32_t b = 0; b < qq; ++b) {
        const Poly pb = index_to_poly(b, p, k);
        Poly sum(std::max(pa.size(), pb.size()), 0);
        for (std::size_t i = 0; i < sum.size(); ++i) {
          const std::uint32_t x = i < pa.size() ? pa[i] : 0;
          const std::uint32_t y = i < pb.size() ? pb[i] : 0;
          sum[i] = (x + y) % p;
        }
        while (!sum.empty() && sum.back() == 0) sum.pop_back();
        t->add_table[a * qq + b] = poly_to_index(sum, p);
        t->mul_table[a * qq + b] = poly_to_index(mul_mod(pa, pb, m, p), p);
      }
    }
  }

  t_ = std::move(t);
}

std::string Field::name() const {
  return std::to_string(t_->p) + "^" + std::to_string(t_->k);
}

Elem Field::element(std::uint32_t index) const {
  if (index >= t_->q) {
    throw Error(Errc::ElementOutOfRange,
                "index " + std::to_string(index) + " outside GF(" + std::to_string(t_->q) + ")");
  }
  return Elem(index);
}

std::vector<std::uint32_t> Field::coeffs(Elem a) const {
  std::vector<std::uint32_t> c(t_->k, 0);
  std::uint32_t idx = a.index();
  for (std::uint32_t i = 0; i < t_->k; ++i) {
    c[i] = idx % t_->p;
    idx /= t_->p;
  }
  return c;
}

Elem Field::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() > t_->k) throw Error(Errc::ElementOutOfRange, "too many coefficients");
  std::uint32_t index = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] >= t_->p) throw Error(Errc::ElementOutOfRange, "coefficient not reduced mod p");
    index = index * t_->p + coeffs[i];
  }
  return Elem(index);
}

Elem Field::slow_add(Elem a, Elem b) const {
  if (t_->p == 2) return Elem(a.index() ^ b.index());
  std::uint32_t x = a.index();
  std::uint32_t y = b.index();
  std::uint32_t out = 0;
  std::uint32_t place = 1;
  for (std::uint32_t i = 0; i < t_->k; ++i) {
    out += ((x % t_->p + y % t_->p) % t_->p) * place;
    x /= t_->p;
    y /= t_->p;
    place *= t_->p;
  }
  return Elem(out);
}

Elem Field::inv(Elem a) const {
  if (a.is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero");
  const std::uint32_t order = t_->q - 1;
  return Elem(t_->exp[(order - t_->log[a.index()]) % order]);
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return one();
  if (a.is_zero()) return zero();
  const std::uint64_t order = t_->q - 1;
  return Elem(t_->exp[(static_cast<std::uint64_t>(t_->log[a.index()]) * (e % order)) % order]);
}

std::uint32_t Field::trace(Elem a) const {
  Elem acc = a;
  Elem cur = a;
  for (std::uint32_t i = 1; i < t_->k; ++i) {
    cur = pow(cur, t_->p);
    acc = add(acc, cur);
  }
  return acc.index();
}

bool operator==(const Field& a, const Field& b) {
  if (a.t_ == b.t_) return true;
  return a.t_->p == b.t_->p && a.t_->k == b.t_->k && a.t_->modulus == b.t_->modulus;
}

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(Field field, std::vector<std::vector<Elem>> rows)
    : field_(std::move(field)), rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(Errc::ParameterOutOfRange, "ragged matrix rows");
    for (Elem e : row) {
      if (!field_.contains(e)) throw Error(Errc::ElementOutOfRange, "matrix entry outside field");
      data_.push_back(e);
    }
  }
}

Elem dot(const Field& field, std::span<const Elem> a, std::span<const Elem> b) {
  Elem acc = field.zero();
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) acc = field.add(acc, field.mul(a[i], b[i]));
  return acc;
}

namespace {

// In-place reduced row echelon form; returns pivot column per pivot row.
std::vector<std::size_t> rref(Matrix& m) {
  const Field& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(sel, c), m.at(row, c));
    }
    const Elem scale = f.inv(m.at(row, col));
    for (std::size_t c = 0; c < m.cols(); ++c) m.at(row, c) = f.mul(m.at(row, c), scale);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m.at(r, col).is_zero()) continue;
      const Elem factor = m.at(r, col);
      for (std::size_t c = 0; c < m.cols(); ++c) {
        m.at(r, c) = f.sub(m.at(r, c), f.mul(factor, m.at(row, c)));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const Matrix& m) {
  Matrix copy = m;
  return rref(copy).size();
}

std::vector<std::vector<Elem>> nullspace(const Field& field, const Matrix& m) {
  if (!(field == m.field())) {
    throw Error(Errc::MixedFields, "matrix over GF(" + m.field().name() + "), expected GF(" + field.name() + ")");
  }
  Matrix r = m;
  const auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<std::vector<Elem>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Elem> v(m.cols(), field.zero());
    v[free] = field.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = field.neg(r.at(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace rslab::gf
