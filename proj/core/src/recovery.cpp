#include "rslab/recovery.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "rslab/error.hpp"

namespace rslab::recovery {

Instance::Instance(gf::Field field, std::vector<Elem> positions)
    : field_(std::move(field)), positions_(std::move(positions)), words_((field_.order() + 63) / 64) {
  if (positions_.size() > field_.order()) {
    throw Error(Errc::SizeExceedsField, "more positions than field elements");
  }
  std::set<Elem> seen;
  for (Elem e : positions_) {
    if (!field_.contains(e)) throw Error(Errc::ElementOutOfRange, "position outside field");
    if (!seen.insert(e).second) throw Error(Errc::InvalidPositions, "repeated position");
  }
  bits_.assign(positions_.size() * words_, 0);
}

Instance Instance::full_length(gf::Field field) {
  std::vector<Elem> positions(field.order());
  for (std::uint32_t i = 0; i < field.order(); ++i) positions[i] = Elem(i);
  return Instance(std::move(field), std::move(positions));
}

Instance Instance::from_lists(gf::Field field, const std::vector<std::vector<Elem>>& lists) {
  if (lists.size() > field.order()) throw Error(Errc::SizeExceedsField, "more lists than field elements");
  std::vector<Elem> positions(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) positions[i] = Elem(static_cast<std::uint32_t>(i));
  Instance inst(std::move(field), std::move(positions));
  for (std::size_t i = 0; i < lists.size(); ++i) {
    for (Elem z : lists[i]) inst.insert(i, z);
  }
  return inst;
}

Instance Instance::from_points(gf::Field field, std::span<const Point> points) {
  Instance inst = full_length(std::move(field));
  for (const auto& [x, y] : points) {
    if (!inst.field_.contains(x)) throw Error(Errc::ElementOutOfRange, "point outside field");
    inst.insert(x.index(), y);
  }
  return inst;
}

void Instance::insert(std::size_t i, Elem z) {
  if (!field_.contains(z)) throw Error(Errc::ElementOutOfRange, "list element outside field");
  bits_[i * words_ + (z.index() >> 6)] |= std::uint64_t{1} << (z.index() & 63);
}

void Instance::erase(std::size_t i, Elem z) {
  if (!field_.contains(z)) throw Error(Errc::ElementOutOfRange, "list element outside field");
  bits_[i * words_ + (z.index() >> 6)] &= ~(std::uint64_t{1} << (z.index() & 63));
}

void Instance::fill(std::size_t i) {
  for (std::uint32_t z = 0; z < field_.order(); ++z) insert(i, Elem(z));
}

std::size_t Instance::list_size(std::size_t i) const {
  std::size_t total = 0;
  for (std::size_t w = 0; w < words_; ++w) total += static_cast<std::size_t>(std::popcount(bits_[i * words_ + w]));
  return total;
}

std::vector<Elem> Instance::list(std::size_t i) const {
  std::vector<Elem> out;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t word = bits_[i * words_ + w];
    while (word != 0) {
      const int bit = std::countr_zero(word);
      out.emplace_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(bit)));
      word &= word - 1;
    }
  }
  return out;
}

std::ptrdiff_t Instance::position_index(Elem x) const {
  const auto it = std::find(positions_.begin(), positions_.end(), x);
  return it == positions_.end() ? -1 : it - positions_.begin();
}

std::vector<Point> Instance::points() const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < length(); ++i) {
    for (Elem z : list(i)) out.emplace_back(positions_[i], z);
  }
  return out;
}

Instance Instance::translated(Elem s, Elem t) const {
  if (length() != field_.order()) {
    throw Error(Errc::InvalidPositions, "translation needs a full-length instance");
  }
  std::vector<Elem> positions(positions_);
  Instance out(field_, std::move(positions));
  for (std::size_t i = 0; i < length(); ++i) {
    const auto target = out.position_index(field_.add(positions_[i], s));
    for (Elem z : list(i)) out.insert(static_cast<std::size_t>(target), field_.add(z, t));
  }
  return out;
}

bool operator==(const Instance& a, const Instance& b) {
  return a.field_ == b.field_ && a.positions_ == b.positions_ && a.bits_ == b.bits_;
}

namespace {

void check_compatible(const RsCode& code, const Instance& inst) {
  if (!(code.field() == inst.field())) {
    throw Error(Errc::MismatchedField, "code over GF(" + code.field().name() + "), instance over GF(" +
                                           inst.field().name() + ")");
  }
  if (!std::equal(code.positions().begin(), code.positions().end(), inst.positions().begin(),
                  inst.positions().end())) {
    throw Error(Errc::MismatchedField, "code and instance positions differ");
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

// Interpolation search over the Cartesian product of the anchor lists. Each
// anchor tuple determines one polynomial; its values at the remaining
// positions are linear in the tuple through the Lagrange basis, so they are
// accumulated depth by depth and checked only at the leaves.
class AnchorSearch {
 public:
  AnchorSearch(const RsCode& code, const Instance& inst, const SearchOptions& options, bool stop_at_first)
      : code_(code), inst_(inst), f_(code.field()), options_(options), stop_at_first_(stop_at_first) {}

  RecoveryResult run() {
    const std::size_t n = inst_.length();
    for (std::size_t i = 0; i < n; ++i) {
      if (inst_.list_size(i) == 0) return result_;
    }
    const std::size_t k = code_.dimension();
    if (k == n) return run_degenerate();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (options_.anchors == AnchorStrategy::SmallestLists) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return inst_.list_size(a) < inst_.list_size(b); });
    }
    const std::vector<std::size_t> anchors(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    rest_.assign(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
    // Check the most selective positions first.
    std::stable_sort(rest_.begin(), rest_.end(),
                     [&](std::size_t a, std::size_t b) { return inst_.list_size(a) < inst_.list_size(b); });

    std::uint64_t product = 1;
    for (std::size_t a : anchors) product = saturating_mul(product, inst_.list_size(a));
    if (!stop_at_first_ && product > kMaxCountSearch) {
      throw Error(Errc::EnumerationTooLarge, "anchor product " + std::to_string(product) + " too large to count");
    }

    anchor_x_.resize(k);
    lists_.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      anchor_x_[j] = inst_.positions()[anchors[j]];
      lists_[j] = inst_.list(anchors[j]);
    }
    const std::size_t r_count = rest_.size();
    lagrange_.assign(k, std::vector<Elem>(r_count));
    for (std::size_t j = 0; j < k; ++j) {
      Elem denom = f_.one();
      for (std::size_t m = 0; m < k; ++m) {
        if (m != j) denom = f_.mul(denom, f_.sub(anchor_x_[j], anchor_x_[m]));
      }
      const Elem denom_inv = f_.inv(denom);
      for (std::size_t r = 0; r < r_count; ++r) {
        const Elem y = inst_.positions()[rest_[r]];
        Elem num = f_.one();
        for (std::size_t m = 0; m < k; ++m) {
          if (m != j) num = f_.mul(num, f_.sub(y, anchor_x_[m]));
        }
        lagrange_[j][r] = f_.mul(num, denom_inv);
      }
    }
    partial_.assign(k, std::vector<Elem>(r_count, f_.zero()));
    choice_.assign(k, f_.zero());
    dfs(0);
    return result_;
  }

 private:
  bool dfs(std::size_t depth) {
    const std::size_t k = lists_.size();
    const std::size_t r_count = rest_.size();
    const auto& weights = lagrange_[depth];
    const auto& base = partial_[depth];
    if (depth + 1 == k) {
      for (Elem v : lists_[depth]) {
        bool ok = true;
        for (std::size_t r = 0; r < r_count; ++r) {
          if (!inst_.contains(rest_[r], f_.add(base[r], f_.mul(weights[r], v)))) {
            ok = false;
            break;
          }
        }
        if (ok) {
          choice_[depth] = v;
          if (record_hit()) return true;
        }
      }
      return false;
    }
    auto& next = partial_[depth + 1];
    for (Elem v : lists_[depth]) {
      for (std::size_t r = 0; r < r_count; ++r) next[r] = f_.add(base[r], f_.mul(weights[r], v));
      choice_[depth] = v;
      if (dfs(depth + 1)) return true;
    }
    return false;
  }

  // Returns true when the search should stop.
  bool record_hit() {
    result_.found = true;
    ++result_.count;
    if (result_.witnesses.size() < options_.witness_cap) {
      std::vector<Point> pts(anchor_x_.size());
      for (std::size_t j = 0; j < pts.size(); ++j) pts[j] = {anchor_x_[j], choice_[j]};
      result_.witnesses.push_back(rs::interpolate(f_, pts));
    }
    return stop_at_first_;
  }

  // d = n-1: every tuple of list values is a codeword.
  RecoveryResult run_degenerate() {
    const std::size_t n = inst_.length();
    result_.found = true;
    if (stop_at_first_) {
      result_.count = 1;
    } else {
      std::uint64_t total = 1;
      for (std::size_t i = 0; i < n; ++i) total = saturating_mul(total, inst_.list_size(i));
      if (total == std::numeric_limits<std::uint64_t>::max()) {
        throw Error(Errc::EnumerationTooLarge, "codeword count overflows 64 bits");
      }
      result_.count = total;
    }
    std::vector<std::vector<Elem>> lists(n);
    for (std::size_t i = 0; i < n; ++i) lists[i] = inst_.list(i);
    std::vector<std::size_t> idx(n, 0);
    const std::size_t cap = std::min<std::uint64_t>(options_.witness_cap, result_.count);
    while (result_.witnesses.size() < cap) {
      std::vector<Point> pts(n);
      for (std::size_t i = 0; i < n; ++i) pts[i] = {inst_.positions()[i], lists[i][idx[i]]};
      result_.witnesses.push_back(rs::interpolate(f_, pts));
      std::size_t i = 0;
      while (i < n && ++idx[i] == lists[i].size()) idx[i++] = 0;
      if (i == n) break;
    }
    return result_;
  }

  const RsCode& code_;
  const Instance& inst_;
  const gf::Field& f_;
  SearchOptions options_;
  bool stop_at_first_;

  std::vector<std::size_t> rest_;
  std::vector<Elem> anchor_x_;
  std::vector<std::vector<Elem>> lists_;
  std::vector<std::vector<Elem>> lagrange_;
  std::vector<std::vector<Elem>> partial_;
  std::vector<Elem> choice_;
  RecoveryResult result_;
};

bool fits(const Instance& inst, std::span<const Elem> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!inst.contains(i, values[i])) return false;
  }
  return true;
}

}  // namespace

bool decide(const RsCode& code, const Instance& inst, const SearchOptions& options) {
  check_compatible(code, inst);
  return AnchorSearch(code, inst, options, true).run().found;
}

RecoveryResult count(const RsCode& code, const Instance& inst, const SearchOptions& options) {
  check_compatible(code, inst);
  return AnchorSearch(code, inst, options, false).run();
}

bool decide_by_enumeration(const RsCode& code, const Instance& inst) {
  check_compatible(code, inst);
  rs::CodewordEnumerator it(code);
  while (it.next()) {
    if (fits(inst, it.current().values)) return true;
  }
  return false;
}

RecoveryResult count_by_enumeration(const RsCode& code, const Instance& inst, std::size_t witness_cap) {
  check_compatible(code, inst);
  RecoveryResult result;
  rs::CodewordEnumerator it(code);
  while (it.next()) {
    if (!fits(inst, it.current().values)) continue;
    result.found = true;
    ++result.count;
    if (result.witnesses.size() < witness_cap) result.witnesses.push_back(it.current().coeffs);
  }
  return result;
}

Agreement max_agreement(const RsCode& code, const Instance& inst) {
  check_compatible(code, inst);
  Agreement best;
  rs::CodewordEnumerator it(code);
  bool first = true;
  const std::size_t n = inst.length();
  while (it.next()) {
    const auto& values = it.current().values;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) agree += inst.contains(i, values[i]) ? 1 : 0;
    if (first || agree > best.value) {
      best.value = agree;
      best.witness = it.current().coeffs;
      first = false;
      if (agree == n) break;
    }
  }
  return best;
}

Instance restrict(const Instance& inst, std::span<const Elem> positions) {
  std::vector<std::size_t> source;
  source.reserve(positions.size());
  for (Elem x : positions) {
    const auto idx = inst.position_index(x);
    if (idx < 0) throw Error(Errc::UnknownPosition, "position " + std::to_string(x.index()) + " not in instance");
    source.push_back(static_cast<std::size_t>(idx));
  }
  Instance out(inst.field(), std::vector<Elem>(positions.begin(), positions.end()));
  for (std::size_t i = 0; i < source.size(); ++i) {
    for (Elem z : inst.list(source[i])) out.insert(i, z);
  }
  return out;
}

RsCode code_for(const Instance& inst, int degree) {
  return RsCode::punctured(inst.field(), degree, std::vector<Elem>(inst.positions().begin(), inst.positions().end()));
}

}  // namespace rslab::recovery
