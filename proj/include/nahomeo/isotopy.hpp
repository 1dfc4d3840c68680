#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nahomeo/seq.hpp"

namespace nahomeo {

inline NormExp point_norm(const PadicNumber& x) { return x.norm(); }
inline NormExp point_norm(const SeqVector& x) { return sup_norm(x); }

inline PadicNumber scale_point(const PadicNumber& x, const PadicNumber& a) { return x * a; }
inline SeqVector scale_point(const SeqVector& x, const PadicNumber& a) { return scale(x, a); }

/// Region outside which an isotopy is the identity: all of the space, or B(0, p^radius_exp).
struct Support {
  std::optional<std::int64_t> radius_exp;

  static Support whole() { return {}; }
  static Support ball(std::int64_t e) { return {e}; }

  bool is_whole() const { return !radius_exp.has_value(); }

  template <class Point>
  bool contains(const Point& x) const {
    return is_whole() || point_norm(x) <= NormExp::power(*radius_exp);
  }

  std::string to_string() const { return is_whole() ? "whole" : "B(0,p^" + std::to_string(*radius_exp) + ")"; }
};

inline void require_parameter(const PadicNumber& t) {
  if (t.norm() > NormExp::power(0)) fail(ErrorKind::DomainError, "isotopy parameter outside B(0,1)");
}

/// A family H_t, t in B(0,1), of homeomorphisms with H_0 = id.
template <class Point>
struct Isotopy {
  using Map = std::function<Point(const Point&, const PadicNumber&)>;

  Map forward;
  Map backward;
  Support support = Support::whole();
  std::string meta;

  Point eval(const Point& x, const PadicNumber& t) const {
    require_parameter(t);
    return forward(x, t);
  }
  Point inv_eval(const Point& x, const PadicNumber& t) const {
    require_parameter(t);
    return backward(x, t);
  }
};

template <class Point>
Isotopy<Point> identity_isotopy(std::string meta = "identity") {
  auto id = [](const Point& x, const PadicNumber&) { return x; };
  return {id, id, Support::ball(0), std::move(meta)};
}

/// Parameter window [a, b]: |a| <= 1, |1 - b| < 1, a != b.
struct ParamWindow {
  PadicNumber a, b;

  ParamWindow(PadicNumber a_, PadicNumber b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.norm() > NormExp::power(0)) fail(ErrorKind::InvalidArgument, "window: |a| > 1");
    if (!(distance(one_like(b), b) < NormExp::power(0))) fail(ErrorKind::InvalidArgument, "window: |1 - b| >= 1");
    if (agrees(a, b)) fail(ErrorKind::InvalidArgument, "window: a = b");
  }

  enum class Region { Identity, End, Inner };

  /// Identity on B(0,|a|) \ B(1,|1-b|), H_1 on B(1,|1-b|), H_((t-a)/(b-a)) elsewhere.
  Region region(const PadicNumber& t) const {
    if (distance(one_like(t), t) <= distance(one_like(b), b)) return Region::End;
    if (t.norm() <= a.norm()) return Region::Identity;
    return Region::Inner;
  }

  PadicNumber inner_parameter(const PadicNumber& t) const { return (t - a) / (b - a); }
};

template <class Point>
Isotopy<Point> reparam(const Isotopy<Point>& H, const ParamWindow& w) {
  auto branch = [H, w](bool inverse) {
    return [H, w, inverse](const Point& x, const PadicNumber& t) -> Point {
      const auto& map = inverse ? H.backward : H.forward;
      switch (w.region(t)) {
        case ParamWindow::Region::Identity: return x;
        case ParamWindow::Region::End: return map(x, one_like(t));
        case ParamWindow::Region::Inner: return map(x, w.inner_parameter(t));
      }
      return x;
    };
  };
  return {branch(false), branch(true), H.support, H.meta + "[a,b]"};
}

/// Indexed factors H^(j+1)[window_j] of an infinite left product.
/// `stable(j, x)` certifies that every factor of index >= j acts as the
/// identity at t = 1 on x; it must hold for a point exactly when it holds for
/// that point's image, so the same certificate serves evaluation and inversion.
template <class Point>
struct FactorStream {
  std::function<Isotopy<Point>(std::size_t)> factor;
  std::function<ParamWindow(std::size_t)> window;
  std::function<bool(std::size_t, const Point&)> stable;
  std::size_t cap = 64;
  std::string meta;
};

template <class Point>
struct ProductTrace {
  Point result;
  /// Point after each evaluated factor, in evaluation order.
  std::vector<Point> states;
  std::size_t factors = 0;
};

namespace detail {

/// Number of factors to evaluate for t != 1: k + 1 with k = v(1 - t), or nullopt at t = 1.
inline std::optional<std::size_t> factor_count(const PadicNumber& t) {
  const PadicNumber gap = one_like(t) - t;
  if (gap.is_zero()) return std::nullopt;
  return static_cast<std::size_t>(std::max<std::int64_t>(gap.valuation(), 0)) + 1;
}

}  // namespace detail

/// L prod_j H^(j+1)[window_j]_t (x) = ... o F_1 o F_0 (x). For |1 - t| = p^-k only
/// factors 0..k can act (factor k certifies the rest as identity); at t = 1 the
/// stream's stabilization certificate decides where the product stops.
template <class Point>
ProductTrace<Point> left_product(const FactorStream<Point>& s, const PadicNumber& t, const Point& x) {
  require_parameter(t);
  ProductTrace<Point> out{x, {}, 0};
  const auto count = detail::factor_count(t);
  if (count) {
    if (*count > s.cap) fail(ErrorKind::NoStabilization, "factor count exceeds the cap of " + std::to_string(s.cap));
    for (std::size_t j = 0; j < *count; ++j) {
      out.result = reparam(s.factor(j), s.window(j)).forward(out.result, t);
      out.states.push_back(out.result);
    }
    out.factors = *count;
    return out;
  }
  for (std::size_t j = 0; j < s.cap; ++j) {
    if (s.stable(j, out.result)) {
      out.factors = j;
      return out;
    }
    out.result = s.factor(j).forward(out.result, one_like(t));
    out.states.push_back(out.result);
  }
  fail(ErrorKind::NoStabilization, "no stabilization within " + std::to_string(s.cap) + " factors");
}

/// Inverse of left_product: the factor inverses in reverse order.
template <class Point>
ProductTrace<Point> left_product_inverse(const FactorStream<Point>& s, const PadicNumber& t, const Point& y) {
  require_parameter(t);
  ProductTrace<Point> out{y, {}, 0};
  std::size_t count = 0;
  if (const auto c = detail::factor_count(t)) {
    if (*c > s.cap) fail(ErrorKind::NoStabilization, "factor count exceeds the cap of " + std::to_string(s.cap));
    count = *c;
  } else {
    bool found = false;
    for (std::size_t j = 0; j <= s.cap && !found; ++j)
      if (s.stable(j, y)) {
        count = j;
        found = true;
      }
    if (!found) fail(ErrorKind::NoStabilization, "no stabilization within " + std::to_string(s.cap) + " factors");
  }
  for (std::size_t j = count; j-- > 0;) {
    out.result = reparam(s.factor(j), s.window(j)).backward(out.result, t);
    out.states.push_back(out.result);
  }
  out.factors = count;
  return out;
}

template <class Point>
Isotopy<Point> left_product_isotopy(FactorStream<Point> s) {
  auto fwd = [s](const Point& x, const PadicNumber& t) { return left_product(s, t, x).result; };
  auto bwd = [s](const Point& y, const PadicNumber& t) { return left_product_inverse(s, t, y).result; };
  return {fwd, bwd, Support::whole(), s.meta};
}

/// r H_t = m_r o H_t o m_(1/r). Points H leaves fixed are returned unchanged,
/// so the support contract stays exact.
template <class Point>
Isotopy<Point> conjugate_scale(const Isotopy<Point>& H, const PadicNumber& r) {
  const PadicNumber r_inv = invert(r);
  auto branch = [H, r, r_inv](bool inverse) {
    return [H, r, r_inv, inverse](const Point& x, const PadicNumber& t) -> Point {
      const Point y = scale_point(x, r_inv);
      const Point z = inverse ? H.backward(y, t) : H.forward(y, t);
      if (z == y) return x;
      return scale_point(z, r);
    };
  };
  Support sup = H.support;
  if (!sup.is_whole()) sup.radius_exp = *sup.radius_exp + r.norm().exponent();
  return {branch(false), branch(true), sup, H.meta + " scaled by r"};
}

/// w : B(0,1)^2 -> B(0,1) with w(0,.) = 0, w(., 0) = 0 and w^-1(1) = {(1,1)}:
/// t u p when either argument is a unit away from 1; otherwise 1 - s, where s is
/// the larger (ties: the first) of 1 - t and 1 - u.
inline PadicNumber default_w(const PadicNumber& t, const PadicNumber& u) {
  const PadicNumber a = one_like(t) - t, b = one_like(u) - u;
  if (a.norm() == NormExp::power(0) || b.norm() == NormExp::power(0))
    return shift(t * u, 1);
  return b.norm() > a.norm() ? u : t;
}

/// phi_r : X_2 -> B(0,1) with phi_r^-1(1) = {0}: 1 - u^(-e) when |y/r| = p^e <= 1, else 0.
template <class Point>
PadicNumber default_phi(const Point& y, const PadicNumber& r) {
  const FieldBackend& f = r.backend();
  const NormExp n = point_norm(y);
  if (n.is_zero()) return one(f, std::max<std::int64_t>(r.precision(), 1));
  const std::int64_t e = n.exponent() + r.valuation();
  if (e >= 0) return PadicNumber::exact_zero(f);
  return one(f, std::max<std::int64_t>(r.precision(), 1)) - uniformizer_power(f, -e, std::max<std::int64_t>(r.precision(), 1));
}

template <class P1, class P2>
using Lemma24Family = std::function<Isotopy<std::pair<P1, P2>>(const PadicNumber&)>;

/// Sample sets on which lemma24_combine checks the contracts of w and phi_r.
template <class P2>
struct Lemma24Samples {
  P2 origin;
  std::vector<P2> points;
  std::vector<PadicNumber> params;
  std::vector<PadicNumber> radii;
};

/// r |-> (x, y) |-> (H_(w(t, phi_r(y))) (x), y).
template <class P1, class P2>
Lemma24Family<P1, P2> lemma24_combine(const Isotopy<P1>& H,
                                      std::function<PadicNumber(const P2&, const PadicNumber&)> phi,
                                      std::function<PadicNumber(const PadicNumber&, const PadicNumber&)> w,
                                      const Lemma24Samples<P2>& samples) {
  auto is_one = [](const PadicNumber& v) { return agrees(v, one_like(v)); };
  for (const auto& r : samples.radii) {
    if (!is_one(phi(samples.origin, r))) fail(ErrorKind::ContractViolation, "phi_r(origin) != 1");
    for (const auto& y : samples.points) {
      const PadicNumber v = phi(y, r);
      if (v.norm() > NormExp::power(0)) fail(ErrorKind::ContractViolation, "phi_r leaves B(0,1)");
      if (!(y == samples.origin) && !point_norm(y).is_zero() && is_one(v))
        fail(ErrorKind::ContractViolation, "phi_r(y) = 1 away from the origin");
    }
  }
  for (const auto& a : samples.params) {
    for (const auto& b : samples.params) {
      const PadicNumber v = w(a, b);
      if (v.norm() > NormExp::power(0)) fail(ErrorKind::ContractViolation, "w leaves B(0,1)");
      if (a.is_zero() && !v.is_zero()) fail(ErrorKind::ContractViolation, "w(0, b) != 0");
      if (is_one(v) != (is_one(a) && is_one(b))) fail(ErrorKind::ContractViolation, "w^-1(1) != {(1,1)}");
    }
  }
  return [H, phi, w](const PadicNumber& r) -> Isotopy<std::pair<P1, P2>> {
    using Point = std::pair<P1, P2>;
    auto branch = [H, phi, w, r](bool inverse) {
      return [H, phi, w, r, inverse](const Point& xy, const PadicNumber& t) -> Point {
        const PadicNumber s = w(t, phi(xy.second, r));
        if (s.is_zero()) return xy;
        return {inverse ? H.backward(xy.first, s) : H.forward(xy.first, s), xy.second};
      };
    };
    return {branch(false), branch(true), Support::whole(), H.meta + " x id (lemma24)"};
  };
}

}  // namespace nahomeo
