#pragma once

// Fourier analysis over F_q^n. Characters are chi_a(x) = e^{2 pi i Tr(a x) / p}
// with Tr the absolute trace, coefficients are f^(a) = <f, chi_a> under
// <u, v> = (1/q^n) sum u conj(v).
//
// Counting codewords of C inside A_1 x ... x A_n:
//   X = |C| sum_{a in C-perp} prod_i g_i^(a_i)
// where g_i is the indicator of A_i. The a = 0 term is the main term and the
// rest is R.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rslab/gf.hpp"
#include "rslab/randmodel.hpp"
#include "rslab/recovery.hpp"
#include "rslab/rscode.hpp"

namespace rslab::fourier {

using gf::Elem;
using Complex = std::complex<double>;

class CharacterTable {
 public:
  explicit CharacterTable(gf::Field field);

  const gf::Field& field() const { return field_; }
  /// Tr(a x) as a residue mod p.
  std::uint32_t pairing(Elem a, Elem x) const { return trace_[field_.mul(a, x).index()]; }
  Complex chi(Elem a, Elem x) const { return roots_[pairing(a, x)]; }
  /// The p-th root of unity e^{2 pi i j / p}.
  Complex root(std::uint32_t j) const { return roots_[j]; }

 private:
  gf::Field field_;
  std::vector<std::uint32_t> trace_;
  std::vector<Complex> roots_;
};

/// Coefficients indexed by the canonical index of a.
using Spectrum = std::vector<Complex>;

/// f^(a) = (1/q) sum_x f(x) conj(chi_a(x)) for f given by its q values.
Spectrum transform(const CharacterTable& table, std::span<const Complex> values);

Spectrum indicator_spectrum(const CharacterTable& table, std::span<const Elem> subset);
Spectrum indicator_spectrum(const gf::Field& field, std::span<const Elem> subset);
/// Spectrum of the list at position i.
Spectrum indicator_spectrum(const CharacterTable& table, const recovery::Instance& inst, std::size_t i);

/// (1/q) sum_x u(x) conj(v(x)).
Complex inner_product(std::span<const Complex> u, std::span<const Complex> v);

/// Duals with more codewords than this are refused.
inline constexpr std::uint64_t kMaxDualCodewords = 1'000'000;

struct Decomposition {
  double main_term = 0.0;  ///< prod_i g_i^(0) = prod_i |A_i| / q
  Complex r;               ///< sum over nonzero dual codewords
  double count = 0.0;      ///< |C| Re(main_term + r)
};

/// A code together with its enumerated dual and character table, reusable
/// across instances on the same positions.
class FourierCounter {
 public:
  /// Throws DualTooLarge when the dual has more than kMaxDualCodewords words.
  explicit FourierCounter(const rs::RsCode& code);

  const rs::RsCode& code() const { return code_; }
  const CharacterTable& characters() const { return table_; }
  std::size_t dual_size() const { return dual_count_; }

  Decomposition decompose(const recovery::Instance& inst) const;

 private:
  rs::RsCode code_;
  CharacterTable table_;
  std::size_t dual_count_ = 0;
  std::vector<std::uint32_t> dual_;  // dual_count_ rows of length n, zero word first
};

double count_via_fourier(const rs::RsCode& code, const recovery::Instance& inst);
Complex r_term(const rs::RsCode& code, const recovery::Instance& inst);

/// E|R|^2 = sum_{w >= 1} W-perp_w (p^2 + p(1-p)/q)^{n-w} (p(1-p)/q)^w. The dual
/// of a (punctured) RS code is MDS, so its weight distribution is the MDS one.
double expected_r_squared_exact(const rs::RsCode& code, double p);

struct MainTermStatistic {
  double log_value = 0.0;  ///< ln prod_i |A_i|/q, -inf if a list is empty
  double value = 0.0;
  bool below_threshold = false;  ///< prod <= q^{-rq} (1 + 0.9 eps)^{0.9 q}
};

/// Requires a full-length instance.
MainTermStatistic main_term_statistic(const recovery::Instance& inst, double r, double eps);

struct FourierCheckRow {
  std::uint64_t trial = 0;
  double main_abs = 0.0;
  double r_abs = 0.0;
  std::uint64_t count_direct = 0;
  double count_fourier = 0.0;
};

struct FourierCheckReport {
  std::vector<FourierCheckRow> rows;
  double exact_r_squared = 0.0;
  double mean_r_squared = 0.0;
  double stderr_r_squared = 0.0;
  double max_count_error = 0.0;
};

/// Samples `trials` iid(p) full-length instances and compares the Fourier
/// count with the direct count, and the mean of |R|^2 with its exact value.
FourierCheckReport fourier_check(const rs::RsCode& code, double p, std::uint64_t trials, std::uint64_t seed,
                                 std::size_t workers);

}  // namespace rslab::fourier
