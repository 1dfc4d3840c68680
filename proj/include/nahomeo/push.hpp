#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nahomeo/isotopy.hpp"

namespace nahomeo {

// Point pushing on c0(1) = {x in c0 : x_1 = 1} with q_1 = (1, 0, 0, ...).
//
//   H^1_t(x) = x + t e_2
//   H^i_t(x) = x + p^(1-i) t eta_i(x) e_(i+1),   eta_i(x) = p^i on U_i, 0 elsewhere,
//
// with U_i = {x : |1 - x_l| < p^-i for l = 2..i}. H^i only moves coordinate i+1
// and U_i only reads coordinates 2..i, so each H^i_t is inverted by subtracting.

namespace detail {

inline PadicNumber p_times(const PadicNumber& t) { return shift(t, 1); }

/// x in U_i. A coordinate whose distance to 1 is zero only to certified
/// precision counts when the precision reaches the level, else it throws.
inline bool in_u(const SeqVector& x, std::size_t i) {
  const auto level = static_cast<std::int64_t>(i) + 1;
  for (std::size_t l = 2; l <= i; ++l) {
    const PadicNumber xl = x.at(l);
    const PadicNumber g = one_like(xl) - xl;
    if (g.is_zero()) {
      if (!g.is_exact_zero() && g.absolute_precision() < level)
        fail(ErrorKind::PrecisionExhausted, "coordinate " + std::to_string(l) + " not certified to level " + std::to_string(level));
      continue;
    }
    if (g.valuation() < level) return false;
  }
  return true;
}

inline SeqVector add_at(const SeqVector& x, std::size_t j, const PadicNumber& v) {
  return x.with_coordinate(j, x.at(j) + v);
}

inline void require_c01(const SeqVector& x) {
  const PadicNumber x1 = x.at(1);
  if (!agrees(x1, one_like(x1))) fail(ErrorKind::DomainError, "x_1 != 1: point outside c0(1)");
}

}  // namespace detail

/// H^i as an isotopy on c0(1), i >= 1.
inline Isotopy<SeqVector> push_factor(std::size_t i) {
  auto branch = [i](bool inverse) {
    return [i, inverse](const SeqVector& x, const PadicNumber& t) -> SeqVector {
      if (t.is_zero()) return x;
      if (i == 1) return detail::add_at(x, 2, inverse ? -t : t);
      if (!detail::in_u(x, i)) return x;
      const PadicNumber step = detail::p_times(t);
      return detail::add_at(x, i + 1, inverse ? -step : step);
    };
  };
  return {branch(false), branch(true), Support::whole(), "H^" + std::to_string(i)};
}

/// Factors j |-> H^(j+1)[1 - p^j, 1 - p^(j+1)] over backend f at precision n.
inline FactorStream<SeqVector> push_c01_stream(const FieldBackend& f, std::int64_t n, std::size_t cap = 64) {
  FactorStream<SeqVector> s;
  s.factor = [](std::size_t j) { return push_factor(j + 1); };
  s.window = [f, n](std::size_t j) {
    const auto e = static_cast<std::int64_t>(j);
    const PadicNumber a = j == 0 ? PadicNumber::exact_zero(f) : one(f, n + e) - uniformizer_power(f, e, n);
    return ParamWindow(a, one(f, n + e + 1) - uniformizer_power(f, e + 1, n));
  };
  // After factors 0..j-1, x outside U_(j+1) stays outside every later U.
  s.stable = [](std::size_t j, const SeqVector& x) { return j >= 1 && !detail::in_u(x, j + 1); };
  s.cap = cap;
  s.meta = "push_point_c01";
  return s;
}

inline ProductTrace<SeqVector> push_point_c01_trace(const PadicNumber& t, const SeqVector& x) {
  detail::require_c01(x);
  return left_product(push_c01_stream(x.backend(), std::max<std::int64_t>(t.precision(), 32)), t, x);
}

inline SeqVector push_point_c01(const PadicNumber& t, const SeqVector& x) { return push_point_c01_trace(t, x).result; }

inline SeqVector push_point_c01_inverse(const PadicNumber& t, const SeqVector& y) {
  detail::require_c01(y);
  return left_product_inverse(push_c01_stream(y.backend(), std::max<std::int64_t>(t.precision(), 32)), t, y).result;
}

inline Isotopy<SeqVector> push_c01_isotopy() {
  return {[](const SeqVector& x, const PadicNumber& t) { return push_point_c01(t, x); },
          [](const SeqVector& y, const PadicNumber& t) { return push_point_c01_inverse(t, y); }, Support::whole(),
          "push_point_c01"};
}

/// q_1 = (1, 0, 0, ...).
inline SeqVector q1(const FieldBackend& f, std::int64_t n) { return unit_vector(f, 1, n); }

/// eta(y) = (1, y_1, y_2, ...).
inline SeqVector shift_in(const SeqVector& y, std::int64_t n) {
  std::vector<PadicNumber> pre;
  pre.reserve(y.prefix_length() + 1);
  pre.push_back(one(y.backend(), n));
  pre.insert(pre.end(), y.prefix().begin(), y.prefix().end());
  return SeqVector(y.backend(), std::move(pre), y.tail(), y.tag());
}

/// eta^-1(x) = (x_2, x_3, ...).
inline SeqVector shift_out(const SeqVector& x) {
  if (x.prefix_length() == 0) return SeqVector(x.backend(), {}, advance_tail(x.tail(), 1), x.tag());
  return SeqVector(x.backend(), std::vector<PadicNumber>(x.prefix().begin() + 1, x.prefix().end()), x.tail(), x.tag());
}

/// G_t = eta^-1 o H_t o eta on the closed unit ball of c0, identity outside.
inline SeqVector push_origin_c0(const PadicNumber& t, const SeqVector& y) {
  require_parameter(t);
  if (sup_norm(y) > NormExp::power(0)) return y;
  return shift_out(push_point_c01(t, shift_in(y, std::max<std::int64_t>(t.precision(), 32))));
}

inline SeqVector push_origin_c0_inverse(const PadicNumber& t, const SeqVector& z) {
  require_parameter(t);
  if (sup_norm(z) > NormExp::power(0)) return z;
  return shift_out(push_point_c01_inverse(t, shift_in(z, std::max<std::int64_t>(t.precision(), 32))));
}

inline Isotopy<SeqVector> push_origin_isotopy() {
  return {[](const SeqVector& y, const PadicNumber& t) { return push_origin_c0(t, y); },
          [](const SeqVector& z, const PadicNumber& t) { return push_origin_c0_inverse(t, z); }, Support::ball(0),
          "push_origin_c0"};
}

// Coordinatewise scaling H_t(x) = (x_1 f_1(t), x_2 f_2(t), ...) with f_j = b_j = u^j
// on |t| = p^-j and 1 elsewhere. Exactly one coordinate moves when |t| < 1, t != 0.

/// Index j with |t| = p^-j >= p^-1, or 0 when every f_j(t) = 1.
inline std::size_t example17_level(const PadicNumber& t) {
  if (t.is_zero()) return 0;
  const std::int64_t v = t.valuation();
  return v >= 1 ? static_cast<std::size_t>(v) : 0;
}

/// f_j(t).
inline PadicNumber example17_f(std::size_t j, const PadicNumber& t, std::int64_t n = 32) {
  const FieldBackend& f = t.backend();
  return j >= 1 && example17_level(t) == j ? uniformizer_power(f, static_cast<std::int64_t>(j), n) : one(f, n);
}

inline SeqVector example17_fixture(const PadicNumber& t, const SeqVector& x) {
  require_parameter(t);
  const std::size_t j = example17_level(t);
  if (j == 0) return x;
  return x.with_coordinate(j, shift(x.at(j), static_cast<std::int64_t>(j)));
}

inline SeqVector example17_inverse(const PadicNumber& t, const SeqVector& y) {
  require_parameter(t);
  const std::size_t j = example17_level(t);
  if (j == 0) return y;
  return y.with_coordinate(j, shift(y.at(j), -static_cast<std::int64_t>(j)));
}

inline Isotopy<SeqVector> example17_isotopy() {
  return {[](const SeqVector& x, const PadicNumber& t) { return example17_fixture(t, x); },
          [](const SeqVector& y, const PadicNumber& t) { return example17_inverse(t, y); }, Support::whole(),
          "example17"};
}

/// Witness of the inverse family's discontinuity at (0, 0): t_n = u^n and
/// y_n = u^n e_n both tend to 0, yet H_(t_n)^-1 (y_n) = e_n has norm 1 while
/// H_0^-1 (0) = 0.
struct Example17Witness {
  std::size_t n = 0;
  PadicNumber t;
  SeqVector y;
  SeqVector preimage;
  NormExp input_size;
  NormExp deviation;
};

inline Example17Witness example17_witness(const FieldBackend& f, std::size_t n, std::int64_t precision = 32) {
  const auto e = static_cast<std::int64_t>(n);
  const PadicNumber t = uniformizer_power(f, e, precision);
  const SeqVector y = scale(unit_vector(f, n, precision), uniformizer_power(f, e, precision));
  const SeqVector pre = example17_inverse(t, y);
  return {n, t, y, pre, max(t.norm(), sup_norm(y)), sup_norm(pre)};
}

/// Isotopies on c0 that the CLI and the suites exercise by name.
inline std::map<std::string, Isotopy<SeqVector>> shipped_isotopies(const FieldBackend& f) {
  std::map<std::string, Isotopy<SeqVector>> out;
  out.emplace("push_c01", push_c01_isotopy());
  out.emplace("push_origin", push_origin_isotopy());
  out.emplace("example17", example17_isotopy());
  out.emplace("push_origin_scaled", conjugate_scale(push_origin_isotopy(), uniformizer_power(f, 2, 32)));
  return out;
}

}  // namespace nahomeo
