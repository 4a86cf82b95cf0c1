#pragma once

// Reed-Solomon codes RS[q,d] and their S-punctured variants, weight
// distributions and duals.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rslab/gf.hpp"

namespace rslab::rs {

using BigInt = boost::multiprecision::cpp_int;
using gf::Elem;
using Coeffs = std::vector<Elem>;
using Point = std::pair<Elem, Elem>;

/// Natural log of a positive integer, -inf for zero.
long double natural_log(const BigInt& x);

/// Guard on brute-force codeword enumeration.
inline constexpr std::uint64_t kMaxEnumeration = 10'000'000;

class RsCode {
 public:
  /// RS[q,d] evaluated at every field element in canonical order.
  static RsCode full(gf::Field field, int degree);
  /// RS[q,d] restricted to `positions` (distinct, in the given order).
  static RsCode punctured(gf::Field field, int degree, std::vector<Elem> positions);

  const gf::Field& field() const { return field_; }
  int degree() const { return degree_; }
  std::size_t length() const { return positions_.size(); }
  std::size_t dimension() const { return static_cast<std::size_t>(degree_) + 1; }
  std::span<const Elem> positions() const { return positions_; }
  bool is_full_length() const { return full_; }

  /// q^{d+1}, saturating at UINT64_MAX.
  std::uint64_t size() const;

 private:
  RsCode(gf::Field field, int degree, std::vector<Elem> positions, bool full)
      : field_(std::move(field)), degree_(degree), positions_(std::move(positions)), full_(full) {}

  gf::Field field_;
  int degree_;
  std::vector<Elem> positions_;
  bool full_;
};

struct Codeword {
  std::vector<Elem> values;
  Coeffs coeffs;

  std::size_t weight() const;
};

/// Horner evaluation of a low-to-high coefficient vector at x.
Elem evaluate(const gf::Field& field, std::span<const Elem> coeffs, Elem x);

Codeword encode(const RsCode& code, std::span<const Elem> coeffs);

/// Unique polynomial of degree < |points| through the given points.
Coeffs interpolate(const gf::Field& field, std::span<const Point> points);

/// Iterates every codeword once, in lexicographic coefficient order with c_0
/// varying fastest (the coefficient vector read as a base-q counter).
class CodewordEnumerator {
 public:
  explicit CodewordEnumerator(const RsCode& code);

  /// Advances to the next codeword; false once exhausted.
  bool next();
  const Codeword& current() const { return current_; }

 private:
  const RsCode* code_;
  std::vector<std::vector<Elem>> powers_;  // powers_[j][i] = positions[i]^j
  Codeword current_;
  bool started_ = false;
  bool done_ = false;
};

/// Throws EnumerationTooLarge when q^{d+1} exceeds `limit`.
std::uint64_t checked_enumeration_size(const RsCode& code, std::uint64_t limit = kMaxEnumeration);

void for_each_codeword(const RsCode& code, const std::function<void(const Codeword&)>& fn);

/// Counts indexed by weight 0..n.
class WeightDistribution {
 public:
  explicit WeightDistribution(std::size_t length) : counts_(length + 1) {}

  std::size_t length() const { return counts_.size() - 1; }
  const BigInt& operator[](std::size_t weight) const { return counts_.at(weight); }
  BigInt& operator[](std::size_t weight) { return counts_.at(weight); }
  BigInt total() const;
  std::map<std::size_t, BigInt> nonzero() const;

  friend bool operator==(const WeightDistribution&, const WeightDistribution&) = default;

 private:
  std::vector<BigInt> counts_;
};

/// Closed-form distribution of an MDS code of length n and dimension k over GF(q):
/// W_{n-i} = C(n,i) sum_{j=0}^{k-1-i} (-1)^j C(n-i,j) (q^{k-i-j} - 1) for i < k.
WeightDistribution mds_weight_distribution(std::uint64_t q, std::size_t n, std::size_t k);

/// Exact distribution of a full-length code; throws PuncturedNotSupported otherwise.
WeightDistribution weight_distribution_exact(const RsCode& code);

WeightDistribution weight_distribution_brute_force(const RsCode& code);

/// ceil(q^{d+1} / i!), an upper bound on the number of codewords of weight q-i.
BigInt weight_bound_crude(std::uint64_t q, int d, int i);

/// ceil(q^{k-i} n^i / i!), an upper bound on codewords of weight n-i in a
/// punctured code of dimension k and length n.
BigInt punctured_weight_bound(std::uint64_t q, std::size_t k, std::size_t n, std::size_t i);

/// A linear code given by an explicit basis.
struct LinearCode {
  gf::Field field;
  std::size_t length = 0;
  std::vector<std::vector<Elem>> basis;

  std::size_t dimension() const { return basis.size(); }
};

/// Rows x^j evaluated at the code positions, j = 0..d.
LinearCode generator(const RsCode& code);

/// True when every basis vector of `a` is orthogonal to every basis vector of `b`.
bool orthogonal(const LinearCode& a, const LinearCode& b);

void for_each_codeword(const LinearCode& code, std::uint64_t limit,
                       const std::function<void(std::span<const Elem>)>& fn);

WeightDistribution weight_distribution_brute_force(const LinearCode& code,
                                                   std::uint64_t limit = kMaxEnumeration);

struct DualCode {
  LinearCode code;
  /// For full-length RS[q,d] with d <= q-2: RS[q, q-d-2].
  std::optional<RsCode> as_rs;
};

/// Full-length: RS[q, q-d-2] (the zero code when d = q-1). Punctured: nullspace
/// of the generator matrix. Orthogonality is checked before returning.
DualCode dual_code(const RsCode& code);

/// Compares the nullspace dual of a punctured code with the plain punctured
/// RS code of complementary dimension on the same positions.
struct PuncturedDualReport {
  std::size_t dual_dimension = 0;
  int plain_degree = -1;
  bool weight_distributions_match = false;
  bool codes_equal = false;
};

PuncturedDualReport compare_punctured_dual(const RsCode& code, std::uint64_t limit = kMaxEnumeration);

}  // namespace rslab::rs
