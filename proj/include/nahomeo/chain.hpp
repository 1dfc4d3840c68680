#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nahomeo/membership.hpp"
#include "nahomeo/sampling.hpp"

namespace nahomeo {

// Segments of the chain
//   c0 ~ c0 \ U E^j ~ A2* ~ A1* ~ s* ~ s
// that are explicit maps here: q (A1* -> s*) with its inverse, and the
// partial-sum homeomorphism A2 -> A3 = {y in c : sup |y_k| = 1, y_k != 0, lim y = 1}.

namespace detail {

inline void require_verdict(const SeqVector& x, NamedSet set, std::size_t depth, const char* op) {
  const auto v = membership(x, set, depth);
  if (v.yes()) return;
  const std::string what = std::string(op) + ": input not certified in " + std::string(to_string(set)) + " (" + v.reason + ")";
  if (v.no()) fail(ErrorKind::DomainError, what);
  fail(ErrorKind::PrecisionExhausted, what);
}

inline std::size_t window_length(const SeqVector& x, std::size_t depth) { return std::max(depth, x.prefix_length()); }

}  // namespace detail

/// Absolute precision q_forward needs to depth: the largest valuation of a
/// denominator 1 - S_m plus one certified digit, m < depth.
inline std::int64_t q_precision_demand(const SeqVector& x, std::size_t depth) {
  const SeqVector w = x.materialized(depth);
  PadicNumber s = PadicNumber::exact_zero(x.backend());
  std::int64_t demand = 1;
  for (std::size_t m = 1; m < depth; ++m) {
    s = s + w.at(m);
    const PadicNumber gap = one_like(s) - s;
    if (gap.is_zero()) fail(ErrorKind::PrecisionExhausted, "1 - S_" + std::to_string(m) + " vanishes at certified precision");
    demand = std::max(demand, gap.valuation() + 1);
  }
  return demand;
}

/// y_1 = x_1, y_(m+1) = x_(m+1) / (1 - x_1 - ... - x_m).
/// Tails x of geometric type with ratio r map to the constant tail 1 - r.
inline SeqVector q_forward(const SeqVector& x0, std::size_t depth) {
  detail::require_verdict(x0, NamedSet::A1Star, depth, "q_forward");
  const std::size_t n = detail::window_length(x0, depth);
  const SeqVector x = x0.materialized(n);
  const std::int64_t demand = q_precision_demand(x, n + 1);
  std::vector<PadicNumber> y;
  y.reserve(n);
  PadicNumber s = PadicNumber::exact_zero(x.backend());
  for (std::size_t m = 1; m <= n; ++m) {
    const PadicNumber xm = x.at(m);
    if (m == 1) {
      y.push_back(xm);
    } else {
      const PadicNumber gap = one_like(s) - s;
      if (gap.absolute_precision() < demand)
        fail(ErrorKind::PrecisionExhausted, "q_forward needs absolute precision " + std::to_string(demand) + " to depth " +
                                                std::to_string(n) + ", have " + std::to_string(gap.absolute_precision()));
      y.push_back(xm / gap);
    }
    s = s + xm;
  }
  const PadicNumber r = std::visit(
      [&](const auto& t) -> PadicNumber {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, GeomDiffTail> || std::is_same_v<T, GeometricTail> ||
                      std::is_same_v<T, ConstMinusGeomTail>)
          return t.ratio;
        else
          fail(ErrorKind::UnsupportedTail, "q_forward closes only geometric tails");
      },
      x.tail());
  return SeqVector(x.backend(), std::move(y), ConstantTail{detail::one_minus(r, y.back())}, SpaceTag::s);
}

/// Inverse transform: x_1 = y_1, x_(m+1) = y_(m+1) (1 - y_m) ... (1 - y_1).
/// A constant tail c maps to the geometric tail c Pi (1 - c)^(k-1).
inline SeqVector q_inverse(const SeqVector& y0, std::size_t depth) {
  detail::require_verdict(y0, NamedSet::SStar, depth, "q_inverse");
  const auto* c = std::get_if<ConstantTail>(&y0.tail());
  if (!c) fail(ErrorKind::UnsupportedTail, "q_inverse closes only constant tails");
  const std::size_t n = detail::window_length(y0, depth);
  const SeqVector y = y0.materialized(n);
  std::vector<PadicNumber> x;
  x.reserve(n);
  PadicNumber prod = one(y.backend(), std::max<std::int64_t>(y.at(1).precision(), 1));
  for (std::size_t m = 1; m <= n; ++m) {
    const PadicNumber ym = y.at(m);
    x.push_back(m == 1 ? ym : ym * prod);
    prod = prod * (one_like(ym) - ym);
  }
  const PadicNumber cv = std::get<ConstantTail>(y.tail()).value;
  return SeqVector(y.backend(), std::move(x), GeometricTail{cv * prod, one_like(cv) - cv}, SpaceTag::c0);
}

/// Point of s* with |1 - y_j| in p^-2..1 on the first len coordinates and a
/// constant tail c with |1 - c| in p^-2..p^-1.
inline SeqVector sample_s_star(Sampler& s, const FieldBackend& f, std::size_t len, std::int64_t n) {
  std::vector<PadicNumber> pre;
  pre.reserve(len);
  for (std::size_t j = 0; j < len; ++j) pre.push_back(one(f, n) - s.nonzero(f, 0, 2, n));
  const PadicNumber c = one(f, n) - s.nonzero(f, 1, 2, n);
  return SeqVector(f, std::move(pre), ConstantTail{c}, SpaceTag::s);
}

/// (1 - y_m) ... (1 - y_1) and 1 - (x_1 + ... + x_m) for m = 1..depth.
struct TelescopingRow {
  std::size_t m = 0;
  PadicNumber product;
  PadicNumber gap;
  bool holds = false;
};

inline std::vector<TelescopingRow> telescoping_rows(const SeqVector& x, const SeqVector& y, std::size_t depth) {
  std::vector<TelescopingRow> out;
  PadicNumber prod = one(x.backend(), 64), s = PadicNumber::exact_zero(x.backend());
  for (std::size_t m = 1; m <= depth; ++m) {
    prod = prod * (one_like(y.at(m)) - y.at(m));
    s = s + x.at(m);
    const PadicNumber gap = one_like(s) - s;
    out.push_back({m, prod, gap, agrees(prod, gap)});
  }
  return out;
}

namespace detail {

/// Index k <= depth with y_k = 0 at certified precision, 0 for the tail, nullopt if none.
inline std::optional<std::size_t> zero_coordinate(const SeqVector& y, std::size_t depth) {
  for (std::size_t k = 1; k <= std::max(depth, y.prefix_length()); ++k)
    if (y.at(k).is_zero()) return k;
  return std::visit(
      [&](const auto& t) -> std::optional<std::size_t> {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstantTail>) {
          if (t.value.is_zero()) return 0;
        } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
          // limit - scale ratio^k can vanish only while |scale ratio^k| = |limit|
          if (t.limit.is_zero()) return 0;
          PadicNumber term = t.scale * t.ratio;
          for (std::size_t k = 1; !term.is_zero() && !(term.norm() < t.limit.norm()); ++k) {
            if (agrees(term, t.limit)) return y.prefix_length() + k;
            term = term * t.ratio;
          }
        } else {
          return 0;
        }
        return std::nullopt;
      },
      y.tail());
}

}  // namespace detail

/// Partial-sum map A2 -> A3. Inputs whose partial sums hit 0 are rejected:
/// their image would leave A3.
inline SeqVector a2_to_a3(const SeqVector& x, std::size_t depth) {
  detail::require_verdict(x, NamedSet::A2, depth, "a2_to_a3");
  SeqVector y = partial_sums(x.materialized(depth));
  if (const auto k = detail::zero_coordinate(y, depth))
    fail(ErrorKind::DomainError, "a2_to_a3: partial sum S_" + (*k ? std::to_string(*k) : std::string("tail")) +
                                     " is zero, image leaves A3");
  return y;
}

/// differences on A3, with the image certified in A2.
inline SeqVector a3_to_a2(const SeqVector& y, std::size_t depth) {
  if (y.tag() != SpaceTag::c) fail(ErrorKind::DomainError, "a3_to_a2: input is not tagged c");
  if (sup_norm(y) != NormExp::power(0)) fail(ErrorKind::DomainError, "a3_to_a2: sup norm is not 1");
  if (const auto k = detail::zero_coordinate(y, depth))
    fail(ErrorKind::DomainError, "a3_to_a2: coordinate " + (*k ? std::to_string(*k) : std::string("in the tail")) + " is zero");
  SeqVector x = differences(y);
  detail::require_verdict(x, NamedSet::A2, std::max(depth, x.prefix_length()), "a3_to_a2");
  return x;
}

struct ChainSegment {
  std::string name;
  std::string domain;
  std::string codomain;
  /// false for segments only checked by property tests (no callable map).
  bool callable = true;
};

inline const std::vector<ChainSegment>& chain_segments() {
  static const std::vector<ChainSegment> segs = {
      {"deletion_c0", "c0", "c0 \\ U E^j", false},
      {"ball_transport", "A2*", "A1*", true},
      {"q_forward", "A1*", "s*", true},
      {"q_inverse", "s*", "A1*", true},
      {"deletion_s", "s*", "s", false},
      {"a2_to_a3", "A2", "A3", true},
      {"a3_to_a2", "A3", "A2", true},
      {"lemma6", "K", "B(0,1) \\ {1}", true},
  };
  return segs;
}

inline const ChainSegment& chain_segment(const std::string& name) {
  for (const auto& s : chain_segments())
    if (s.name == name) return s;
  fail(ErrorKind::InvalidArgument, "unknown chain segment '" + name + "'");
}

/// Sequence-valued segments by name.
inline SeqVector chain_eval(const std::string& name, const SeqVector& x, std::size_t depth) {
  if (name == "q_forward") return q_forward(x, depth);
  if (name == "q_inverse") return q_inverse(x, depth);
  if (name == "a2_to_a3") return a2_to_a3(x, depth);
  if (name == "a3_to_a2") return a3_to_a2(x, depth);
  const auto& seg = chain_segment(name);
  if (!seg.callable) fail(ErrorKind::InvalidArgument, "segment '" + name + "' is property-verified only");
  fail(ErrorKind::InvalidArgument, "segment '" + name + "' acts on field points, not sequences");
}

/// Sup over the first `window` coordinates of |u_j - v_j|.
inline NormExp window_deviation(const SeqVector& u, const SeqVector& v, std::size_t window) {
  NormExp d = NormExp::zero();
  for (std::size_t j = 1; j <= window; ++j) d = max(d, distance(u.at(j), v.at(j)));
  return d;
}

struct ModulusRow {
  std::int64_t delta = 0;
  /// Largest observed output deviation over the window; ZERO when none.
  NormExp deviation;
  std::size_t samples = 0;
  std::size_t escapes = 0;
};

struct ModulusTable {
  std::string segment;
  std::size_t window = 0;
  std::vector<ModulusRow> rows;
};

/// Perturbation of sup norm exactly p^-delta on coordinates 1..len with zero
/// sum, so that series sums are unchanged.
inline std::vector<PadicNumber> balanced_perturbation(Sampler& s, const FieldBackend& f, std::size_t len,
                                                      std::int64_t delta, std::int64_t n_digits) {
  if (len < 2) fail(ErrorKind::InvalidArgument, "perturbation needs at least two coordinates");
  std::vector<PadicNumber> e;
  PadicNumber sum = PadicNumber::exact_zero(f);
  const auto lead = static_cast<std::size_t>(s.uniform(0, static_cast<std::int64_t>(len) - 2));
  for (std::size_t j = 0; j + 1 < len; ++j) {
    PadicNumber v = j == lead ? s.with_valuation(f, delta, n_digits)
                              : (s.coin() ? PadicNumber::exact_zero(f) : s.nonzero(f, delta, delta + 4, n_digits));
    sum = sum + v;
    e.push_back(std::move(v));
  }
  e.push_back(-sum);
  return e;
}

/// Empirical continuity modulus of a sequence segment at x: for each delta,
/// the largest output deviation over `samples` perturbations of size p^-delta.
/// Perturbations that leave the certified domain are counted as escapes.
inline ModulusTable continuity_probe(const std::string& name, const SeqVector& x, const std::vector<std::int64_t>& deltas,
                                     std::size_t samples, std::size_t depth, std::uint64_t seed = 0) {
  const SeqVector base = x.materialized(depth);
  const SeqVector fx = chain_eval(name, base, depth);
  ModulusTable out{name, depth + 4, {}};
  Sampler s(seed);
  const FieldBackend& f = x.backend();
  const std::int64_t n_digits = std::max<std::int64_t>(base.at(1).precision(), 8);
  for (const std::int64_t delta : deltas) {
    ModulusRow row{delta, NormExp::zero(), 0, 0};
    for (std::size_t i = 0; i < samples; ++i) {
      const auto e = balanced_perturbation(s, f, depth, delta, n_digits);
      std::vector<PadicNumber> pre = base.prefix();
      for (std::size_t j = 0; j < e.size(); ++j) pre[j] = pre[j] + e[j];
      try {
        const SeqVector xe(f, std::move(pre), base.tail(), base.tag());
        const SeqVector fe = chain_eval(name, xe, depth);
        row.deviation = max(row.deviation, window_deviation(fx, fe, out.window));
        ++row.samples;
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::DomainError && err.kind() != ErrorKind::NotInSpace &&
            err.kind() != ErrorKind::PrecisionExhausted)
          throw;
        ++row.escapes;
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace nahomeo
