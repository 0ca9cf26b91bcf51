#include "clpv/domain.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace clpv {

IntWidth::IntWidth(int b) : bits(b) {
  if (b < 2 || b > 32) throw std::invalid_argument("width must be in 2..32");
}

Domain Domain::interval(Val lo, Val hi) {
  Domain d;
  if (lo <= hi) d.ivs_.push_back({lo, hi});
  return d;
}

Domain Domain::from_intervals(std::vector<Interval> ivs) {
  std::erase_if(ivs, [](const Interval& i) { return i.lo > i.hi; });
  std::sort(ivs.begin(), ivs.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  Domain d;
  for (const Interval& iv : ivs) {
    if (!d.ivs_.empty() && iv.lo <= d.ivs_.back().hi + 1) {
      d.ivs_.back().hi = std::max(d.ivs_.back().hi, iv.hi);
    } else {
      d.ivs_.push_back(iv);
    }
  }
  if (d.ivs_.size() > kMaxIntervals) {
    // Hull collapse keeps memory bounded at the cost of precision.
    Interval hull{d.ivs_.front().lo, d.ivs_.back().hi};
    d.ivs_.assign(1, hull);
  }
  return d;
}

bool Domain::contains(Val v) const {
  for (const Interval& iv : ivs_) {
    if (v < iv.lo) return false;
    if (v <= iv.hi) return true;
  }
  return false;
}

std::uint64_t Domain::size() const {
  std::uint64_t n = 0;
  for (const Interval& iv : ivs_) n += std::uint64_t(iv.hi - iv.lo + 1);
  return n;
}

Domain Domain::intersect(const Domain& o) const {
  Domain d;
  std::size_t i = 0, j = 0;
  while (i < ivs_.size() && j < o.ivs_.size()) {
    Val lo = std::max(ivs_[i].lo, o.ivs_[j].lo);
    Val hi = std::min(ivs_[i].hi, o.ivs_[j].hi);
    if (lo <= hi) d.ivs_.push_back({lo, hi});
    if (ivs_[i].hi < o.ivs_[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return d;
}

Domain Domain::unite(const Domain& o) const {
  std::vector<Interval> all = ivs_;
  all.insert(all.end(), o.ivs_.begin(), o.ivs_.end());
  return from_intervals(std::move(all));
}

Domain Domain::remove(Val v) const {
  Domain d;
  for (const Interval& iv : ivs_) {
    if (v < iv.lo || v > iv.hi) {
      d.ivs_.push_back(iv);
      continue;
    }
    if (iv.lo <= v - 1) d.ivs_.push_back({iv.lo, v - 1});
    if (v + 1 <= iv.hi) d.ivs_.push_back({v + 1, iv.hi});
  }
  return d;
}

Domain Domain::clamp_min(Val lo) const {
  Domain d;
  for (const Interval& iv : ivs_) {
    if (iv.hi < lo) continue;
    d.ivs_.push_back({std::max(iv.lo, lo), iv.hi});
  }
  return d;
}

Domain Domain::clamp_max(Val hi) const {
  Domain d;
  for (const Interval& iv : ivs_) {
    if (iv.lo > hi) break;
    d.ivs_.push_back({iv.lo, std::min(iv.hi, hi)});
  }
  return d;
}

Domain Domain::shift(Val c) const {
  Domain d;
  for (const Interval& iv : ivs_) d.ivs_.push_back({iv.lo + c, iv.hi + c});
  return d;
}

Domain Domain::negated() const {
  Domain d;
  for (auto it = ivs_.rbegin(); it != ivs_.rend(); ++it) {
    d.ivs_.push_back({-it->hi, -it->lo});
  }
  return d;
}

std::vector<Val> Domain::values() const {
  std::vector<Val> out;
  for (const Interval& iv : ivs_) {
    for (Val v = iv.lo; v <= iv.hi; ++v) out.push_back(v);
  }
  return out;
}

std::optional<Val> Domain::first_geq(Val v) const {
  for (const Interval& iv : ivs_) {
    if (iv.hi < v) continue;
    return std::max(iv.lo, v);
  }
  return std::nullopt;
}

std::optional<Val> Domain::last_leq(Val v) const {
  for (auto it = ivs_.rbegin(); it != ivs_.rend(); ++it) {
    if (it->lo > v) continue;
    return std::min(it->hi, v);
  }
  return std::nullopt;
}

std::string Domain::to_string(const IntWidth* w) const {
  if (empty()) return "{}";
  std::ostringstream os;
  auto bound = [&](Val v) -> std::string {
    if (w && v == w->min_int()) return "inf";
    if (w && v == w->max_int()) return "sup";
    return std::to_string(v);
  };
  bool first = true;
  for (const Interval& iv : ivs_) {
    if (!first) os << " u ";
    first = false;
    if (iv.lo == iv.hi) {
      os << "{" << iv.lo << "}";
    } else {
      os << "[" << bound(iv.lo) << "," << bound(iv.hi) << "]";
    }
  }
  return os.str();
}

namespace iset {

Domain add(const Domain& a, const Domain& b) {
  std::vector<Interval> out;
  for (const Interval& x : a.intervals()) {
    for (const Interval& y : b.intervals()) {
      out.push_back({x.lo + y.lo, x.hi + y.hi});
    }
  }
  return Domain::from_intervals(std::move(out));
}

Domain sub(const Domain& a, const Domain& b) { return add(a, b.negated()); }

Domain mul(const Domain& a, const Domain& b) {
  std::vector<Interval> out;
  for (const Interval& x : a.intervals()) {
    for (const Interval& y : b.intervals()) {
      Val c[4] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
      out.push_back({*std::min_element(c, c + 4), *std::max_element(c, c + 4)});
    }
  }
  return Domain::from_intervals(std::move(out));
}

static Val tdiv(Val a, Val b) { return a / b; }  // C++ division truncates

// Hull of trunc(a/b) over a sign-pure interval x and sign-pure, zero-free
// interval y: corners are extremal because the quotient is monotone in each
// argument on such boxes.
static Interval div_box(Interval x, Interval y) {
  Val c[4] = {tdiv(x.lo, y.lo), tdiv(x.lo, y.hi), tdiv(x.hi, y.lo),
              tdiv(x.hi, y.hi)};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

static void split_signs(const Interval& iv, bool drop_zero,
                        std::vector<Interval>& out) {
  if (iv.hi < 0 || iv.lo > 0) {
    out.push_back(iv);
    return;
  }
  if (iv.lo <= -1) out.push_back({iv.lo, -1});
  if (!drop_zero && iv.lo <= 0 && iv.hi >= 0) out.push_back({0, 0});
  if (iv.hi >= 1) out.push_back({1, iv.hi});
}

Domain div_trunc(const Domain& a, const Domain& b) {
  std::vector<Interval> xs, ys, out;
  for (const Interval& iv : a.intervals()) split_signs(iv, false, xs);
  for (const Interval& iv : b.intervals()) split_signs(iv, true, ys);
  for (const Interval& x : xs) {
    for (const Interval& y : ys) out.push_back(div_box(x, y));
  }
  return Domain::from_intervals(std::move(out));
}

static Val max_abs(const Domain& d) {
  if (d.empty()) return 0;
  return std::max(std::abs(d.min()), std::abs(d.max()));
}

Domain mod_trunc(const Domain& a, const Domain& b) {
  Domain bz = b.remove(0);
  if (a.empty() || bz.empty()) return Domain();
  Val bound = max_abs(bz) - 1;
  std::vector<Interval> out;
  if (a.max() >= 0) out.push_back({0, std::min(a.max(), bound)});
  if (a.min() <= 0) out.push_back({std::max(a.min(), -bound), 0});
  return Domain::from_intervals(std::move(out));
}

Domain div_inv_dividend(const Domain& x, const Domain& b, const Domain& a) {
  Domain bz = b.remove(0);
  if (x.empty() || bz.empty()) return Domain();
  // a = x*b + r with |r| <= |b|-1, so a lies in hull(x*b) widened by |b|-1.
  Domain prod = mul(x, bz);
  Val slack = max_abs(bz) - 1;
  Domain widened = Domain::interval(prod.min() - slack, prod.max() + slack);
  return a.intersect(widened);
}

Domain div_inv_divisor(const Domain& x, const Domain& a, const Domain& b) {
  Domain bz = b.remove(0);
  if (x.empty() || a.empty() || bz.empty()) return Domain();
  // Only enumerate when cheap; otherwise leave the divisor untouched.
  if (bz.size() <= 1024 && a.size() <= 1024) {
    std::vector<Interval> keep;
    for (Val y : bz.values()) {
      Domain q = div_trunc(a, Domain::singleton(y));
      if (!q.intersect(x).empty()) keep.push_back({y, y});
    }
    return Domain::from_intervals(std::move(keep));
  }
  return bz;
}

}  // namespace iset

}  // namespace clpv
