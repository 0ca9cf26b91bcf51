#ifndef CLPV_DOMAIN_HPP
#define CLPV_DOMAIN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace clpv {

using Val = std::int64_t;

/// Signed integer width in bits. All finite-domain variables live in
/// [min_int(), max_int()]; arithmetic is over mathematical integers with
/// results clipped back into this range (out-of-range means failure).
struct IntWidth {
  int bits = 8;

  explicit IntWidth(int b = 8);
  Val min_int() const { return -(Val(1) << (bits - 1)); }
  Val max_int() const { return (Val(1) << (bits - 1)) - 1; }
  bool contains(Val v) const { return v >= min_int() && v <= max_int(); }
};

struct Interval {
  Val lo;
  Val hi;
  bool operator==(const Interval&) const = default;
};

/// Finite union of disjoint, non-adjacent closed intervals.
/// Canonical form: sorted, and consecutive intervals separated by a gap
/// of at least 2. The empty union represents failure.
class Domain {
 public:
  // At most this many intervals are kept; beyond it the union collapses
  // to its bounding interval (sound over-approximation).
  static constexpr std::size_t kMaxIntervals = 64;

  Domain() = default;  // empty
  static Domain full(IntWidth w) { return interval(w.min_int(), w.max_int()); }
  static Domain singleton(Val v) { return interval(v, v); }
  static Domain interval(Val lo, Val hi);
  static Domain from_intervals(std::vector<Interval> ivs);  // normalizes

  bool empty() const { return ivs_.empty(); }
  bool is_singleton() const {
    return ivs_.size() == 1 && ivs_[0].lo == ivs_[0].hi;
  }
  Val min() const { return ivs_.front().lo; }
  Val max() const { return ivs_.back().hi; }
  Val value() const { return ivs_[0].lo; }  // requires is_singleton()
  bool contains(Val v) const;
  std::uint64_t size() const;
  const std::vector<Interval>& intervals() const { return ivs_; }

  Domain intersect(const Domain& o) const;
  Domain unite(const Domain& o) const;
  Domain remove(Val v) const;
  Domain clamp_min(Val lo) const;  // keep values >= lo
  Domain clamp_max(Val hi) const;  // keep values <= hi

  /// Pointwise translation by c.
  Domain shift(Val c) const;
  /// Pointwise negation.
  Domain negated() const;

  /// Enumerate all values in ascending order (use only on small domains).
  std::vector<Val> values() const;

  /// Smallest member >= v, if any.
  std::optional<Val> first_geq(Val v) const;
  /// Largest member <= v, if any.
  std::optional<Val> last_leq(Val v) const;

  std::string to_string(const IntWidth* w = nullptr) const;

  bool operator==(const Domain&) const = default;

 private:
  std::vector<Interval> ivs_;
};

/// Interval-set arithmetic used by the propagators. All results are sound
/// supersets of the pointwise image and are returned in canonical form.
namespace iset {
Domain add(const Domain& a, const Domain& b);
Domain sub(const Domain& a, const Domain& b);
Domain mul(const Domain& a, const Domain& b);
Domain div_trunc(const Domain& a, const Domain& b);  // truncated division, b != 0
Domain mod_trunc(const Domain& a, const Domain& b);  // remainder, sign of a
/// Values y with trunc(a/y) intersecting x, for y in b (inverse of division).
Domain div_inv_divisor(const Domain& x, const Domain& a, const Domain& b);
/// Values a with trunc(a/b) in x, for divisors in b.
Domain div_inv_dividend(const Domain& x, const Domain& b, const Domain& a);
}  // namespace iset

}  // namespace clpv

#endif
