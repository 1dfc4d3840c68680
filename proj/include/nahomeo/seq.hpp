#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "nahomeo/padic.hpp"

namespace nahomeo {

/// Which space a sequence is asserted to live in.
enum class SpaceTag { c0, c, s, none };

inline std::string_view to_string(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::c0: return "c0";
    case SpaceTag::c: return "c";
    case SpaceTag::s: return "s";
    case SpaceTag::none: return "none";
  }
  return "none";
}

// Tail rules are indexed relative to the end of the explicit prefix: the
// coordinate at position P + k (k >= 1) is the rule's k-th term.

struct ZeroTail {
  friend bool operator==(const ZeroTail&, const ZeroTail&) = default;
};

/// scale * (ratio^(k-1) - ratio^k), |ratio| < 1.
struct GeomDiffTail {
  PadicNumber scale, ratio;
  friend bool operator==(const GeomDiffTail&, const GeomDiffTail&) = default;
};

struct ConstantTail {
  PadicNumber value;
  friend bool operator==(const ConstantTail&, const ConstantTail&) = default;
};

/// scale * ratio^(k-1).
struct GeometricTail {
  PadicNumber scale, ratio;
  friend bool operator==(const GeometricTail&, const GeometricTail&) = default;
};

/// limit - scale * ratio^k, |ratio| < 1.
struct ConstMinusGeomTail {
  PadicNumber limit, scale, ratio;
  friend bool operator==(const ConstMinusGeomTail&, const ConstMinusGeomTail&) = default;
};

/// block[(k-1) mod block.size()].
struct PeriodicTail {
  std::vector<PadicNumber> block;
  friend bool operator==(const PeriodicTail&, const PeriodicTail&) = default;
};

using TailRule = std::variant<ZeroTail, GeomDiffTail, ConstantTail, GeometricTail, ConstMinusGeomTail, PeriodicTail>;

namespace detail {

inline void require_contracting(const PadicNumber& ratio, const char* what) {
  if (ratio.norm() > NormExp::power(-1))
    fail(ErrorKind::InvalidArgument, std::string(what) + " ratio must have norm exponent <= -1");
}

/// 1 - r carried to the absolute precision of r; `hint` digits when r is exact zero.
inline PadicNumber one_minus(const PadicNumber& r, const PadicNumber& hint) {
  if (r.is_exact_zero()) return one(r.backend(), std::max<std::int64_t>(hint.precision(), 1));
  return one(r.backend(), std::max<std::int64_t>(r.absolute_precision(), 1)) - r;
}

inline bool all_zero(const std::vector<PadicNumber>& xs) {
  for (const auto& x : xs)
    if (!x.is_zero()) return false;
  return true;
}

inline void check_tail(const TailRule& tail) {
  if (auto* g = std::get_if<GeomDiffTail>(&tail)) require_contracting(g->ratio, "geom_diff");
  if (auto* g = std::get_if<ConstMinusGeomTail>(&tail)) require_contracting(g->ratio, "const_minus_geom");
  if (auto* g = std::get_if<PeriodicTail>(&tail))
    if (g->block.empty()) fail(ErrorKind::InvalidArgument, "periodic tail needs a non-empty block");
}

}  // namespace detail

/// k-th term (k >= 1) of a tail rule.
inline PadicNumber tail_term(const TailRule& tail, const FieldBackend& backend, std::size_t k) {
  const auto e = static_cast<std::int64_t>(k);
  return std::visit(
      [&](const auto& t) -> PadicNumber {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ZeroTail>) {
          return PadicNumber::exact_zero(backend);
        } else if constexpr (std::is_same_v<T, GeomDiffTail>) {
          if (t.ratio.is_exact_zero()) return k == 1 ? t.scale : PadicNumber::exact_zero(backend);
          return t.scale * pow(t.ratio, e - 1) * detail::one_minus(t.ratio, t.scale);
        } else if constexpr (std::is_same_v<T, ConstantTail>) {
          return t.value;
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          if (t.ratio.is_exact_zero()) return k == 1 ? t.scale : PadicNumber::exact_zero(backend);
          return t.scale * pow(t.ratio, e - 1);
        } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
          return t.limit - t.scale * pow(t.ratio, e);
        } else {
          return t.block[(k - 1) % t.block.size()];
        }
      },
      tail);
}

/// The rule describing terms k + n, k >= 1 (the tail after n terms are consumed).
inline TailRule advance_tail(const TailRule& tail, std::size_t n) {
  if (n == 0) return tail;
  const auto e = static_cast<std::int64_t>(n);
  return std::visit(
      [&](const auto& t) -> TailRule {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, GeomDiffTail>) {
          return GeomDiffTail{t.scale * pow(t.ratio, e), t.ratio};
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          return GeometricTail{t.scale * pow(t.ratio, e), t.ratio};
        } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
          return ConstMinusGeomTail{t.limit, t.scale * pow(t.ratio, e), t.ratio};
        } else if constexpr (std::is_same_v<T, PeriodicTail>) {
          PeriodicTail out = t;
          const std::size_t r = n % t.block.size();
          std::rotate(out.block.begin(), out.block.begin() + static_cast<std::ptrdiff_t>(r), out.block.end());
          return out;
        } else {
          return t;
        }
      },
      tail);
}

/// A sequence over the field presented by an explicit prefix and a tail rule.
class SeqVector {
 public:
  SeqVector(FieldBackend backend, std::vector<PadicNumber> prefix, TailRule tail = ZeroTail{},
            SpaceTag tag = SpaceTag::c0)
      : backend_(backend), prefix_(std::move(prefix)), tail_(std::move(tail)), tag_(tag) {
    for (const auto& x : prefix_) require_same_backend_as(x);
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, GeomDiffTail> || std::is_same_v<T, GeometricTail>) {
            require_same_backend_as(t.scale);
            require_same_backend_as(t.ratio);
          } else if constexpr (std::is_same_v<T, ConstantTail>) {
            require_same_backend_as(t.value);
          } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
            require_same_backend_as(t.limit);
            require_same_backend_as(t.scale);
            require_same_backend_as(t.ratio);
          } else if constexpr (std::is_same_v<T, PeriodicTail>) {
            for (const auto& b : t.block) require_same_backend_as(b);
          }
        },
        tail_);
    detail::check_tail(tail_);
    if (tag_ == SpaceTag::c0 && !tail_tends_to_zero())
      fail(ErrorKind::NotInSpace, "tail rule does not tend to zero; cannot tag as c0");
    if (tag_ == SpaceTag::c && !tail_has_limit())
      fail(ErrorKind::NotInSpace, "tail rule has no limit; cannot tag as c");
  }

  const FieldBackend& backend() const { return backend_; }
  const std::vector<PadicNumber>& prefix() const { return prefix_; }
  std::size_t prefix_length() const { return prefix_.size(); }
  const TailRule& tail() const { return tail_; }
  SpaceTag tag() const { return tag_; }

  /// Coordinate j (1-based), materializing the tail rule beyond the prefix.
  PadicNumber at(std::size_t j) const {
    if (j == 0) fail(ErrorKind::InvalidArgument, "coordinates are 1-based");
    if (j <= prefix_.size()) return prefix_[j - 1];
    return tail_term(tail_, backend_, j - prefix_.size());
  }

  /// Coordinates 1..n.
  std::vector<PadicNumber> window(std::size_t n) const {
    std::vector<PadicNumber> out;
    out.reserve(n);
    for (std::size_t j = 1; j <= n; ++j) out.push_back(at(j));
    return out;
  }

  /// Same sequence with the prefix extended to at least `len` entries.
  SeqVector materialized(std::size_t len) const {
    if (len <= prefix_.size()) return *this;
    std::vector<PadicNumber> pre = window(len);
    return SeqVector(backend_, std::move(pre), advance_tail(tail_, len - prefix_.size()), tag_);
  }

  SeqVector with_tag(SpaceTag tag) const { return SeqVector(backend_, prefix_, tail_, tag); }

  /// Replaces coordinate j (1-based).
  SeqVector with_coordinate(std::size_t j, PadicNumber value) const {
    SeqVector out = materialized(j);
    out.prefix_[j - 1] = std::move(value);
    return SeqVector(out.backend_, std::move(out.prefix_), out.tail_, SpaceTag::none).with_tag_unchecked(tag_);
  }

  /// True when every tail term is certified zero (the sequence has finite support).
  bool tail_is_zero() const {
    return std::visit(
        [&](const auto& t) -> bool {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ZeroTail>) {
            return true;
          } else if constexpr (std::is_same_v<T, GeomDiffTail> || std::is_same_v<T, GeometricTail>) {
            return t.scale.is_zero();
          } else if constexpr (std::is_same_v<T, ConstantTail>) {
            return t.value.is_zero();
          } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
            return t.limit.is_zero() && t.scale.is_zero();
          } else {
            return detail::all_zero(t.block);
          }
        },
        tail_);
  }

  bool tail_tends_to_zero() const {
    return std::visit(
        [&](const auto& t) -> bool {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ZeroTail> || std::is_same_v<T, GeomDiffTail>) {
            return true;
          } else if constexpr (std::is_same_v<T, ConstantTail>) {
            return t.value.is_zero();
          } else if constexpr (std::is_same_v<T, GeometricTail>) {
            return t.scale.is_zero() || t.ratio.norm() < NormExp::power(0);
          } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
            return t.limit.is_zero();
          } else {
            return detail::all_zero(t.block);
          }
        },
        tail_);
  }

  bool tail_has_limit() const {
    if (tail_tends_to_zero()) return true;
    return std::visit(
        [&](const auto& t) -> bool {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ConstantTail> || std::is_same_v<T, ConstMinusGeomTail>) {
            return true;
          } else if constexpr (std::is_same_v<T, GeometricTail>) {
            return agrees(t.ratio, one(t.ratio.backend(), 1));
          } else if constexpr (std::is_same_v<T, PeriodicTail>) {
            for (const auto& b : t.block)
              if (!agrees(b, t.block.front())) return false;
            return true;
          } else {
            return false;
          }
        },
        tail_);
  }

  /// Identical representation: same prefix digits and precisions, tail rule and tag.
  friend bool operator==(const SeqVector&, const SeqVector&) = default;

 private:
  SeqVector with_tag_unchecked(SpaceTag tag) const {
    SeqVector out = *this;
    out.tag_ = tag;
    return out;
  }

  void require_same_backend_as(const PadicNumber& x) const {
    if (!(x.backend() == backend_))
      fail(ErrorKind::BackendMismatch, "sequence over " + backend_.name() + " holds " + x.backend().name());
  }

  FieldBackend backend_;
  std::vector<PadicNumber> prefix_;
  TailRule tail_;
  SpaceTag tag_;
};

/// Standard base vector e_j = (0, ..., 0, 1, 0, ...).
inline SeqVector unit_vector(const FieldBackend& backend, std::size_t j, std::int64_t precision,
                             SpaceTag tag = SpaceTag::c0) {
  std::vector<PadicNumber> pre(j, PadicNumber::exact_zero(backend));
  pre[j - 1] = one(backend, precision);
  return SeqVector(backend, std::move(pre), ZeroTail{}, tag);
}

inline SeqVector zero_vector(const FieldBackend& backend, SpaceTag tag = SpaceTag::c0) {
  return SeqVector(backend, {}, ZeroTail{}, tag);
}

/// j-th coordinate (natural projection).
inline PadicNumber project(const SeqVector& v, std::size_t j) { return v.at(j); }

namespace detail {

/// sup over k >= 1 of |limit - scale * ratio^k| for |ratio| < 1.
inline NormExp const_minus_geom_sup(const ConstMinusGeomTail& t) {
  const NormExp lim = t.limit.norm();
  if (t.scale.is_zero() || t.ratio.is_zero()) return lim;
  // terms shrink by |ratio| each step, so with a zero limit the first term dominates
  if (lim.is_zero()) return (t.scale * t.ratio).norm();
  NormExp best = NormExp::zero();
  PadicNumber term = t.scale * t.ratio;
  // |scale * ratio^k| strictly decreases; once below |limit| every term has norm |limit|.
  while (!term.is_zero() && !(term.norm() < lim)) {
    best = max(best, (t.limit - term).norm());
    term = term * t.ratio;
  }
  return max(best, lim);
}

}  // namespace detail

/// Exact norm supremum over the tail terms.
inline NormExp tail_sup_norm(const TailRule& tail) {
  return std::visit(
      [&](const auto& t) -> NormExp {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ZeroTail>) {
          return NormExp::zero();
        } else if constexpr (std::is_same_v<T, GeomDiffTail>) {
          // |s r^(k-1) (1 - r)| = |s| |r|^(k-1), largest at k = 1.
          return t.scale.norm();
        } else if constexpr (std::is_same_v<T, ConstantTail>) {
          return t.value.norm();
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          if (!t.scale.is_zero() && t.ratio.norm() > NormExp::power(0))
            fail(ErrorKind::UnboundedTail, "geometric tail with |ratio| > 1");
          return t.scale.norm();
        } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
          return detail::const_minus_geom_sup(t);
        } else {
          NormExp best = NormExp::zero();
          for (const auto& b : t.block) best = max(best, b.norm());
          return best;
        }
      },
      tail);
}

/// ||v|| = sup_j |v_j| for v tagged c0 or c.
inline NormExp sup_norm(const SeqVector& v) {
  if (v.tag() != SpaceTag::c0 && v.tag() != SpaceTag::c)
    fail(ErrorKind::InvalidArgument, "sup_norm needs a c0- or c-tagged vector");
  NormExp best = tail_sup_norm(v.tail());
  for (const auto& x : v.prefix()) best = max(best, x.norm());
  return best;
}

/// y_k = x_1 + ... + x_k, mapping c0 onto c.
inline SeqVector partial_sums(const SeqVector& x) {
  if (x.tag() != SpaceTag::c0) fail(ErrorKind::InvalidArgument, "partial_sums needs a c0-tagged vector");
  const FieldBackend& f = x.backend();
  std::vector<PadicNumber> pre;
  pre.reserve(x.prefix_length());
  PadicNumber acc = PadicNumber::exact_zero(f);
  for (const auto& xi : x.prefix()) {
    acc = acc + xi;
    pre.push_back(acc);
  }
  const PadicNumber& s = acc;
  TailRule tail = std::visit(
      [&](const auto& t) -> TailRule {
        using T = std::decay_t<decltype(t)>;
        if (x.tail_is_zero()) return ConstantTail{s};
        if constexpr (std::is_same_v<T, GeomDiffTail>) {
          // S + s(1 - r^k)
          return ConstMinusGeomTail{s + t.scale, t.scale, t.ratio};
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          // S + s(1 - r^k)/(1 - r)
          const PadicNumber q = t.scale / detail::one_minus(t.ratio, t.scale);
          return ConstMinusGeomTail{s + q, q, t.ratio};
        } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
          // limit is zero: terms are -s r^k = (-s r) r^(k-1)
          const PadicNumber q = (t.scale * t.ratio) / detail::one_minus(t.ratio, t.scale);
          return ConstMinusGeomTail{s - q, -q, t.ratio};
        } else {
          // Zero, zero constant and all-zero periodic tails.
          return ConstantTail{s};
        }
      },
      x.tail());
  return SeqVector(f, std::move(pre), std::move(tail), SpaceTag::c);
}

/// x_1 = y_1, x_k = y_k - y_{k-1}, mapping c onto c0.
inline SeqVector differences(const SeqVector& y) {
  if (y.tag() != SpaceTag::c) fail(ErrorKind::InvalidArgument, "differences needs a c-tagged vector");
  const FieldBackend& f = y.backend();
  std::vector<PadicNumber> pre;
  pre.reserve(y.prefix_length() + 1);
  PadicNumber prev = PadicNumber::exact_zero(f);
  for (const auto& yi : y.prefix()) {
    pre.push_back(yi - prev);
    prev = yi;
  }
  // The first tail term is irregular; move it into the prefix.
  pre.push_back(tail_term(y.tail(), f, 1) - prev);
  TailRule tail = std::visit(
      [&](const auto& t) -> TailRule {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
          // (L - s r^(k+1)) - (L - s r^k) = (s r)(r^(k-1) - r^k)
          return GeomDiffTail{t.scale * t.ratio, t.ratio};
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          if (t.scale.is_zero()) return ZeroTail{};
          // s r^k - s r^(k-1) = -s (r^(k-1) - r^k)
          return GeomDiffTail{-t.scale, t.ratio};
        } else if constexpr (std::is_same_v<T, GeomDiffTail>) {
          // s(r^k - r^(k+1)) - s(r^(k-1) - r^k) = -s (1 - r)^2 r^(k-1)
          const PadicNumber w = detail::one_minus(t.ratio, t.scale);
          return GeometricTail{-(t.scale * w * w), t.ratio};
        } else {
          // Zero, constant and constant-block periodic tails.
          return ZeroTail{};
        }
      },
      y.tail());
  return SeqVector(f, std::move(pre), std::move(tail), SpaceTag::c0);
}

/// a * v, coordinatewise.
inline SeqVector scale(const SeqVector& v, const PadicNumber& a) {
  std::vector<PadicNumber> pre;
  pre.reserve(v.prefix_length());
  for (const auto& x : v.prefix()) pre.push_back(a * x);
  TailRule tail = std::visit(
      [&](const auto& t) -> TailRule {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ZeroTail>) {
          return t;
        } else if constexpr (std::is_same_v<T, GeomDiffTail>) {
          return GeomDiffTail{a * t.scale, t.ratio};
        } else if constexpr (std::is_same_v<T, ConstantTail>) {
          return ConstantTail{a * t.value};
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          return GeometricTail{a * t.scale, t.ratio};
        } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
          return ConstMinusGeomTail{a * t.limit, a * t.scale, t.ratio};
        } else {
          PeriodicTail out;
          for (const auto& b : t.block) out.block.push_back(a * b);
          return out;
        }
      },
      v.tail());
  return SeqVector(v.backend(), std::move(pre), std::move(tail), v.tag());
}

namespace detail {

inline bool same_ratio(const PadicNumber& a, const PadicNumber& b) { return agrees(a, b); }

inline TailRule add_tails(const TailRule& a, const TailRule& b) {
  if (std::holds_alternative<ZeroTail>(a)) return b;
  if (std::holds_alternative<ZeroTail>(b)) return a;
  if (auto* x = std::get_if<ConstantTail>(&a))
    if (auto* y = std::get_if<ConstantTail>(&b)) return ConstantTail{x->value + y->value};
  if (auto* x = std::get_if<GeomDiffTail>(&a))
    if (auto* y = std::get_if<GeomDiffTail>(&b); y && same_ratio(x->ratio, y->ratio))
      return GeomDiffTail{x->scale + y->scale, x->ratio};
  if (auto* x = std::get_if<GeometricTail>(&a))
    if (auto* y = std::get_if<GeometricTail>(&b); y && same_ratio(x->ratio, y->ratio))
      return GeometricTail{x->scale + y->scale, x->ratio};
  if (auto* x = std::get_if<ConstMinusGeomTail>(&a))
    if (auto* y = std::get_if<ConstMinusGeomTail>(&b); y && same_ratio(x->ratio, y->ratio))
      return ConstMinusGeomTail{x->limit + y->limit, x->scale + y->scale, x->ratio};
  if (auto* x = std::get_if<PeriodicTail>(&a))
    if (auto* y = std::get_if<PeriodicTail>(&b); y && x->block.size() == y->block.size()) {
      PeriodicTail out;
      for (std::size_t i = 0; i < x->block.size(); ++i) out.block.push_back(x->block[i] + y->block[i]);
      return out;
    }
  fail(ErrorKind::UnsupportedTail, "sum of these tail rules has no closed form in the catalog");
}

}  // namespace detail

/// u + v. Tails must be combinable (one zero, or same kind and ratio).
inline SeqVector add(const SeqVector& u, const SeqVector& v) {
  if (!(u.backend() == v.backend())) fail(ErrorKind::BackendMismatch, "sequence sum across backends");
  const std::size_t len = std::max(u.prefix_length(), v.prefix_length());
  const SeqVector a = u.materialized(len), b = v.materialized(len);
  std::vector<PadicNumber> pre;
  pre.reserve(len);
  for (std::size_t i = 0; i < len; ++i) pre.push_back(a.prefix()[i] + b.prefix()[i]);
  const SpaceTag tag = u.tag() == v.tag() ? u.tag() : SpaceTag::none;
  return SeqVector(u.backend(), std::move(pre), detail::add_tails(a.tail(), b.tail()), tag);
}

inline SeqVector operator+(const SeqVector& u, const SeqVector& v) { return add(u, v); }

/// Coordinates 1..depth agree at certified precision.
inline bool coordinates_agree(const SeqVector& u, const SeqVector& v, std::size_t depth) {
  for (std::size_t j = 1; j <= depth; ++j)
    if (!agrees(u.at(j), v.at(j))) return false;
  return true;
}

}  // namespace nahomeo
