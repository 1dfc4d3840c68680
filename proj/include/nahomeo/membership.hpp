#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "nahomeo/seq.hpp"

namespace nahomeo {

/// Named subsets of c0 and of the product s.
enum class NamedSet { A0, A1, A1Star, A2, A2Star, S, SStar };

inline std::string_view to_string(NamedSet set) {
  switch (set) {
    case NamedSet::A0: return "A0";
    case NamedSet::A1: return "A1";
    case NamedSet::A1Star: return "A1*";
    case NamedSet::A2: return "A2";
    case NamedSet::A2Star: return "A2*";
    case NamedSet::S: return "s";
    case NamedSet::SStar: return "s*";
  }
  return "?";
}

enum class Verdict { Yes, No, Inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Outcome of a membership test. `reason` names the deciding condition and
/// `index` the coordinate that decided it, when there is one.
struct MembershipVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  std::size_t depth = 0;
  std::optional<std::size_t> index;

  bool yes() const { return verdict == Verdict::Yes; }
  bool no() const { return verdict == Verdict::No; }
};

namespace detail {

inline MembershipVerdict verdict_yes(std::size_t depth, std::string reason) {
  return {Verdict::Yes, std::move(reason), depth, std::nullopt};
}
inline MembershipVerdict verdict_no(std::size_t depth, std::string reason,
                                    std::optional<std::size_t> index = std::nullopt) {
  return {Verdict::No, std::move(reason), depth, index};
}
inline MembershipVerdict verdict_unknown(std::size_t depth, std::string reason) {
  return {Verdict::Inconclusive, std::move(reason), depth, std::nullopt};
}

/// Whether a c0 sequence has infinitely many nonzero coordinates, decided from its tail rule.
inline std::optional<bool> has_infinite_support(const SeqVector& x) {
  if (x.tail_is_zero()) {
    if (std::holds_alternative<ZeroTail>(x.tail())) return false;
    // Tail terms are zero only to certified precision.
    bool exact = std::visit(
        [](const auto& t) -> bool {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ZeroTail>) {
            return true;
          } else if constexpr (std::is_same_v<T, GeomDiffTail> || std::is_same_v<T, GeometricTail>) {
            return t.scale.is_exact_zero();
          } else if constexpr (std::is_same_v<T, ConstantTail>) {
            return t.value.is_exact_zero();
          } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
            return t.limit.is_exact_zero() && t.scale.is_exact_zero();
          } else {
            for (const auto& b : t.block)
              if (!b.is_exact_zero()) return false;
            return true;
          }
        },
        x.tail());
    if (exact) return false;
    return std::nullopt;
  }
  return std::visit(
      [](const auto& t) -> std::optional<bool> {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
          if (!t.limit.is_zero()) return true;
        }
        if constexpr (std::is_same_v<T, GeomDiffTail> || std::is_same_v<T, GeometricTail> ||
                      std::is_same_v<T, ConstMinusGeomTail>) {
          // Terms are +-scale * ratio^k up to a unit factor.
          if (t.ratio.is_exact_zero()) return false;
          if (t.ratio.is_zero()) return std::nullopt;
          return true;
        } else {
          // Nonzero constant or periodic tails never reach zero.
          return true;
        }
      },
      x.tail());
}

/// Conditions on partial sums shared by the A-sets.
inline MembershipVerdict membership_a(const SeqVector& x0, NamedSet set, std::size_t depth) {
  if (x0.tag() != SpaceTag::c0) return verdict_no(depth, "not a c0 vector");
  const SeqVector x = x0.materialized(depth);
  const FieldBackend& f = x.backend();
  const SeqVector y = partial_sums(x);
  const std::size_t d = y.prefix_length();

  if (sup_norm(y) != NormExp::power(0)) return verdict_no(depth, "sup of partial-sum norms is " + sup_norm(y).to_string() + ", not 1");
  if (set == NamedSet::A0) return verdict_yes(depth, "sup of partial-sum norms is 1");

  PadicNumber limit = PadicNumber::exact_zero(f);
  PadicNumber sigma = PadicNumber::exact_zero(f), rho = PadicNumber::exact_zero(f);
  if (auto* t = std::get_if<ConstantTail>(&y.tail())) {
    limit = t->value;
  } else if (auto* t = std::get_if<ConstMinusGeomTail>(&y.tail())) {
    limit = t->limit;
    sigma = t->scale;
    rho = t->ratio;
  } else {
    return verdict_unknown(depth, "partial sums have no closed-form limit");
  }
  const PadicNumber unit = one_like(limit);
  if (!agrees(limit, unit)) return verdict_no(depth, "series sum " + limit.to_string() + " is not 1");

  // 1 - S_k for k = 1..d+1, the last from the first tail term.
  std::vector<PadicNumber> gap;
  gap.reserve(d + 1);
  for (std::size_t k = 1; k <= d + 1; ++k) gap.push_back(unit - y.at(k));

  if (set == NamedSet::A1 || set == NamedSet::A1Star) {
    for (std::size_t k = 1; k <= d; ++k)
      if (gap[k].norm() > gap[k - 1].norm())
        return verdict_no(depth, "|1 - S_" + std::to_string(k + 1) + "| > |1 - S_" + std::to_string(k) + "|", k + 1);
    // Beyond the window |1 - S_{d+k}| = |sigma| |rho|^k is nonincreasing.
  } else {
    for (std::size_t k = 1; k <= d; ++k) {
      if (gap[k - 1].is_exact_zero()) return verdict_no(depth, "partial sum S_" + std::to_string(k) + " equals 1", k);
      if (gap[k - 1].is_zero())
        return verdict_unknown(depth, "S_" + std::to_string(k) + " agrees with 1 only to certified precision");
    }
    if (sigma.is_exact_zero() || rho.is_exact_zero())
      return verdict_no(depth, "partial sums equal 1 beyond coordinate " + std::to_string(d), d + 1);
    if (sigma.is_zero() || rho.is_zero())
      return verdict_unknown(depth, "tail partial sums agree with 1 to certified precision");
  }

  if (set == NamedSet::A1 || set == NamedSet::A2) return verdict_yes(depth, "partial-sum conditions hold; tail closed by rule");

  const auto infinite = has_infinite_support(x);
  if (!infinite) return verdict_unknown(depth, "support size undecided at certified precision");
  if (!*infinite) {
    std::size_t last = 0;
    for (std::size_t j = 1; j <= x.prefix_length(); ++j)
      if (!x.at(j).is_zero()) last = j;
    return verdict_no(depth, "finite support (lies in E^" + std::to_string(std::max<std::size_t>(last, 1)) + ")");
  }
  // Infinite support with monotone gaps forces S_k != 1; the window must certify it.
  for (std::size_t k = 1; k <= d; ++k)
    if (gap[k - 1].is_zero())
      return verdict_unknown(depth, "S_" + std::to_string(k) + " agrees with 1 only to certified precision");
  return verdict_yes(depth, "partial-sum conditions hold and support is infinite");
}

/// Coordinate in B(0,1) \ {1}.
inline std::optional<std::string> punctured_ball_violation(const PadicNumber& y) {
  if (y.norm() > NormExp::power(0)) return "norm " + y.norm().to_string() + " exceeds 1";
  if (agrees(y, one_like(y))) return "coordinate equals 1";
  return std::nullopt;
}

/// Tail terms of an s-vector are in B(0,1)\{1}: yes, no (with term index) or undecided.
inline MembershipVerdict s_tail_check(const SeqVector& y, std::size_t depth) {
  const std::size_t d = y.prefix_length();
  const FieldBackend& f = y.backend();
  const TailRule& tail = y.tail();
  auto check_term = [&](std::size_t k) -> std::optional<MembershipVerdict> {
    if (auto bad = punctured_ball_violation(tail_term(tail, f, k)))
      return verdict_no(depth, "coordinate " + std::to_string(d + k) + ": " + *bad, d + k);
    return std::nullopt;
  };
  if (auto* t = std::get_if<GeometricTail>(&tail); t && !t->ratio.is_zero() && t->ratio.norm() >= NormExp::power(0)) {
    if (t->ratio.norm() > NormExp::power(0) && !t->scale.is_zero())
      return verdict_no(depth, "geometric tail is unbounded");
    if (t->scale.norm() == NormExp::power(0))
      return verdict_unknown(depth, "unit geometric tail may return to 1");
    return verdict_yes(depth, "");
  }
  if (auto* t = std::get_if<PeriodicTail>(&tail)) {
    for (std::size_t k = 1; k <= t->block.size(); ++k)
      if (auto v = check_term(k)) return *v;
    return verdict_yes(depth, "");
  }
  if (auto* t = std::get_if<ConstMinusGeomTail>(&tail)) {
    const PadicNumber gap = one_like(t->limit) - t->limit;
    if (t->limit.norm() > NormExp::power(0)) return verdict_no(depth, "tail limit outside B(0,1)");
    if (gap.is_zero() && (t->scale.is_zero() || t->ratio.is_zero()))
      return verdict_no(depth, "tail coordinates equal 1", d + 1);
    // Once |s r^k| < min(|1 - L|, 1) every later term is in B(0,1)\{1}.
    const NormExp floor = gap.is_zero() ? NormExp::power(0) : min(gap.norm(), NormExp::power(0));
    PadicNumber term = t->scale * t->ratio;
    std::size_t k = 1;
    while (!term.is_zero() && !(term.norm() < floor)) {
      if (auto v = check_term(k)) return *v;
      term = term * t->ratio;
      ++k;
    }
    if (auto v = check_term(k)) return *v;
    return verdict_yes(depth, "");
  }
  // Zero, constant, geom_diff and contracting geometric tails: later terms
  // are no larger than the first, and strictly smaller than 1 after it.
  if (auto v = check_term(1)) return *v;
  if (auto v = check_term(2)) return *v;
  return verdict_yes(depth, "");
}

/// Whether prod (1 - y_j) over the tail tends to zero.
inline std::optional<bool> tail_product_vanishes(const SeqVector& y) {
  const FieldBackend& f = y.backend();
  return std::visit(
      [&](const auto& t) -> std::optional<bool> {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ZeroTail> || std::is_same_v<T, GeomDiffTail>) {
          return false;
        } else if constexpr (std::is_same_v<T, ConstantTail>) {
          return (one_like(t.value) - t.value).norm() < NormExp::power(0);
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          if (t.scale.is_zero()) return false;
          if (t.ratio.norm() < NormExp::power(0)) return false;
          if (t.scale.norm() < NormExp::power(0)) return false;
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
          return (one_like(t.limit) - t.limit).norm() < NormExp::power(0);
        } else {
          PadicNumber beta = one(f, 1);
          std::int64_t prec = 1;
          for (const auto& b : t.block)
            if (!b.is_exact_zero()) prec = std::max(prec, b.absolute_precision());
          beta = one(f, prec);
          for (const auto& b : t.block) beta = beta * (one(f, prec) - b);
          return beta.norm() < NormExp::power(0);
        }
      },
      y.tail());
}

inline MembershipVerdict membership_s(const SeqVector& y0, NamedSet set, std::size_t depth) {
  const SeqVector y = y0.materialized(depth);
  for (std::size_t j = 1; j <= y.prefix_length(); ++j)
    if (auto bad = punctured_ball_violation(y.at(j)))
      return verdict_no(depth, "coordinate " + std::to_string(j) + ": " + *bad, j);
  MembershipVerdict tail = s_tail_check(y, depth);
  if (!tail.yes()) return tail;
  if (set == NamedSet::S) return verdict_yes(depth, "every coordinate lies in B(0,1)\\{1}");

  const auto vanishes = tail_product_vanishes(y);
  if (!vanishes) return verdict_unknown(depth, "limit of prod (1 - y_j) undecided for this tail");
  if (!*vanishes) return verdict_no(depth, "prod (1 - y_j) does not tend to 0");
  const auto infinite = has_infinite_support(y.with_tag(SpaceTag::none));
  if (!infinite) return verdict_unknown(depth, "support size undecided at certified precision");
  if (!*infinite) return verdict_no(depth, "finite support");
  return verdict_yes(depth, "coordinates in B(0,1)\\{1}, prod (1 - y_j) -> 0, infinite support");
}

}  // namespace detail

/// Certified membership of v in a named set. Coordinates 1..depth are
/// checked explicitly; the remainder is closed through the tail rule.
/// Equalities are decided at certified precision.
inline MembershipVerdict membership(const SeqVector& v, NamedSet set, std::size_t depth) {
  if (depth < v.prefix_length()) fail(ErrorKind::InvalidArgument, "depth must be at least the prefix length");
  try {
    switch (set) {
      case NamedSet::S:
      case NamedSet::SStar: return detail::membership_s(v, set, depth);
      default: return detail::membership_a(v, set, depth);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::PrecisionExhausted || e.kind() == ErrorKind::DivisionByZeroAtPrecision)
      return detail::verdict_unknown(depth, e.what());
    throw;
  }
}

}  // namespace nahomeo
