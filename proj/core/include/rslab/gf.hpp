#pragma once

// Exact arithmetic over GF(p^k).
//
// An element is identified by its index in the canonical ordering a_1, ..., a_q:
// the residue c_0 + c_1 x + ... + c_{k-1} x^{k-1} has index sum_i c_i p^i, so the
// ordering is lexicographic on (c_{k-1}, ..., c_0), a_1 = 0, and prime fields
// enumerate as 0, 1, ..., p-1. Because the index is a bijection onto fully
// reduced residues, structural equality of indices is field equality.

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rslab::gf {

inline constexpr std::uint32_t kMaxOrder = 1u << 20;

class Elem {
 public:
  constexpr Elem() = default;
  constexpr explicit Elem(std::uint32_t index) : index_(index) {}

  constexpr std::uint32_t index() const { return index_; }
  constexpr bool is_zero() const { return index_ == 0; }

  friend constexpr bool operator==(Elem, Elem) = default;
  friend constexpr auto operator<=>(Elem, Elem) = default;

 private:
  std::uint32_t index_ = 0;
};

/// Characteristic, extension degree and (optionally) the defining modulus.
/// `modulus` is low-to-high with k+1 entries and a leading 1; leave it empty to
/// get the lexicographically smallest monic irreducible of degree k.
struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t k = 1;
  std::vector<std::uint32_t> modulus;

  /// Parses "p^k" or a bare order such as "16".
  static FieldSpec parse(std::string_view text);
};

bool is_prime(std::uint64_t n);

/// Monic irreducible test by trial division against every monic polynomial of
/// degree <= deg/2. Coefficients low-to-high over GF(p).
bool is_irreducible(std::span<const std::uint32_t> poly, std::uint32_t p);

/// Smallest monic irreducible of degree k, comparing the non-leading
/// coefficients from c_{k-1} down to c_0.
std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, std::uint32_t k);

/// Immutable, cheaply copyable arithmetic context.
class Field {
 public:
  explicit Field(FieldSpec spec);
  static Field parse(std::string_view text) { return Field(FieldSpec::parse(text)); }

  std::uint32_t characteristic() const { return t_->p; }
  std::uint32_t degree() const { return t_->k; }
  std::uint32_t order() const { return t_->q; }
  std::span<const std::uint32_t> modulus() const { return t_->modulus; }
  std::string name() const;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  /// The element a_{index+1} of the canonical ordering.
  Elem element(std::uint32_t index) const;
  bool contains(Elem a) const { return a.index() < t_->q; }

  std::vector<std::uint32_t> coeffs(Elem a) const;
  Elem from_coeffs(std::span<const std::uint32_t> coeffs) const;

  Elem add(Elem a, Elem b) const {
    if (!t_->add_table.empty()) return Elem(t_->add_table[a.index() * t_->q + b.index()]);
    return slow_add(a, b);
  }
  Elem neg(Elem a) const { return Elem(t_->neg_table[a.index()]); }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (!t_->mul_table.empty()) return Elem(t_->mul_table[a.index() * t_->q + b.index()]);
    if (a.is_zero() || b.is_zero()) return Elem(0);
    return Elem(t_->exp[t_->log[a.index()] + t_->log[b.index()]]);
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;

  /// Absolute trace Tr(a) = a + a^p + ... + a^{p^{k-1}}, returned as an integer in [0, p).
  std::uint32_t trace(Elem a) const;

  friend bool operator==(const Field& a, const Field& b);

 private:
  struct Tables {
    std::uint32_t p = 0;
    std::uint32_t k = 0;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> modulus;
    std::vector<std::uint32_t> add_table;
    std::vector<std::uint32_t> mul_table;
    std::vector<std::uint32_t> neg_table;
    std::vector<std::uint32_t> log;
    std::vector<std::uint32_t> exp;  // length 2(q-1) so log sums need no reduction
  };

  Elem slow_add(Elem a, Elem b) const;

  std::shared_ptr<const Tables> t_;
};

/// Row-major matrix over one field.
class Matrix {
 public:
  Matrix(Field field, std::size_t rows, std::size_t cols);
  Matrix(Field field, std::vector<std::vector<Elem>> rows);

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Elem& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Elem at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Elem> data_;
};

/// Dot product sum_i a_i b_i.
Elem dot(const Field& field, std::span<const Elem> a, std::span<const Elem> b);

std::size_t rank(const Matrix& m);

/// Basis of { v : M v = 0 }. Throws MixedFields if `m` was built over another field.
std::vector<std::vector<Elem>> nullspace(const Field& field, const Matrix& m);

}  // namespace rslab::gf
