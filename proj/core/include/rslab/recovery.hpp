#pragma once

// List recovery for Reed-Solomon codes: given lists A_1..A_n, decide whether
// some codeword has w_i in A_i for every i, count such codewords, and compute
// the largest agreement max_w #{i : w_i in A_i}.

#include <cstdint>
#include <span>
#include <vector>

#include "rslab/gf.hpp"
#include "rslab/rscode.hpp"

namespace rslab::recovery {

using gf::Elem;
using rs::Coeffs;
using rs::Point;
using rs::RsCode;

/// Lists A_1..A_n over F_q, one q-bit membership mask per position. Position i
/// carries the evaluation point positions()[i]; the S-view is the point set
/// {(positions()[i], z) : z in A_i}.
class Instance {
 public:
  /// All lists empty.
  Instance(gf::Field field, std::vector<Elem> positions);

  /// Full-length instance (positions in canonical order) with empty lists.
  static Instance full_length(gf::Field field);
  /// Positions are the first lists.size() canonical elements.
  static Instance from_lists(gf::Field field, const std::vector<std::vector<Elem>>& lists);
  /// Full-length instance built from an S-view point set.
  static Instance from_points(gf::Field field, std::span<const Point> points);

  const gf::Field& field() const { return field_; }
  std::size_t length() const { return positions_.size(); }
  std::span<const Elem> positions() const { return positions_; }

  bool contains(std::size_t i, Elem z) const {
    const std::uint32_t idx = z.index();
    return (bits_[i * words_ + (idx >> 6)] >> (idx & 63)) & 1u;
  }
  void insert(std::size_t i, Elem z);
  void erase(std::size_t i, Elem z);
  void fill(std::size_t i);
  std::size_t list_size(std::size_t i) const;
  std::vector<Elem> list(std::size_t i) const;
  /// Index of the position carrying evaluation point x, or -1.
  std::ptrdiff_t position_index(Elem x) const;

  std::vector<Point> points() const;
  /// Image under (x, y) -> (x + s, y + t). Requires a full-length instance.
  Instance translated(Elem s, Elem t) const;

  friend bool operator==(const Instance&, const Instance&);

 private:
  gf::Field field_;
  std::vector<Elem> positions_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

struct RecoveryResult {
  bool found = false;
  std::uint64_t count = 0;
  std::vector<Coeffs> witnesses;
};

enum class AnchorStrategy {
  SmallestLists,  ///< d+1 positions with the smallest lists, ties by index.
  FixedPrefix,    ///< positions 0..d.
};

struct SearchOptions {
  AnchorStrategy anchors = AnchorStrategy::SmallestLists;
  std::size_t witness_cap = 16;
};

/// Upper bound on the search space `count` will traverse.
inline constexpr std::uint64_t kMaxCountSearch = std::uint64_t{1} << 36;

bool decide(const RsCode& code, const Instance& inst, const SearchOptions& options = {});
RecoveryResult count(const RsCode& code, const Instance& inst, const SearchOptions& options = {});

/// The same questions answered by scanning every codeword.
bool decide_by_enumeration(const RsCode& code, const Instance& inst);
RecoveryResult count_by_enumeration(const RsCode& code, const Instance& inst, std::size_t witness_cap = 16);

struct Agreement {
  std::size_t value = 0;
  Coeffs witness;
};

/// Exhaustive over q^{d+1} <= 10^7 codewords; the witness is the first argmax
/// in enumeration order.
Agreement max_agreement(const RsCode& code, const Instance& inst);

/// Sub-instance on `positions` (each must be a position of `inst`), in the given order.
Instance restrict(const Instance& inst, std::span<const Elem> positions);

/// The code matching an instance's positions (full-length when possible).
RsCode code_for(const Instance& inst, int degree);

}  // namespace rslab::recovery
