#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nahomeo/ball.hpp"

namespace nahomeo {

/// Ultrametric space presented as a finite union of clopen balls of K.
/// `carrier.resolution` is R: the space resolves balls down to radius p^-R.
struct PresentedSpace {
  Partition<PadicNumber> carrier;
  /// Relative precision of centers produced while refining balls.
  std::int64_t working_precision = 32;

  NormExp distance(const PadicNumber& a, const PadicNumber& b) const { return nahomeo::distance(a, b); }
  bool contains(const PadicNumber& x) const { return carrier.covers(x); }
  std::int64_t resolution() const { return carrier.resolution; }
  const FieldBackend& backend() const {
    if (carrier.balls.empty()) fail(ErrorKind::InvalidArgument, "empty carrier");
    return carrier.balls.front().center.backend();
  }
};

/// Locally constant function on a finite ball union M, bounded by p^bound_exp.
struct PresentedFunction {
  Partition<PadicNumber> domain;
  std::vector<PadicNumber> values;
  std::int64_t bound_exp = 0;

  NormExp bound() const { return NormExp::power(bound_exp); }

  std::optional<PadicNumber> at(const PadicNumber& x) const {
    const auto i = domain.locate(x);
    if (!i) return std::nullopt;
    return values[*i];
  }

  PadicNumber operator()(const PadicNumber& x) const {
    const auto i = domain.locate(x);
    if (!i) fail(ErrorKind::OutsideCarrier, "point outside the function's domain");
    return values[*i];
  }
};

/// One stage of the construction: u_n on P_{n+1}, and P_{n+1} itself.
struct StageResult {
  std::int64_t n = 0;
  PresentedFunction u;
  Partition<PadicNumber> next;
};

/// Keeps the digits of `a` below exponent e and zeroes the rest, so the result
/// is the canonical center of the class a + B(0, p^-e) at a's own precision.
inline PadicNumber class_center(const PadicNumber& a, std::int64_t e) {
  if (a.is_exact_zero()) return a;
  if (a.absolute_precision() < e)
    fail(ErrorKind::PrecisionExhausted, "value not certified to exponent " + std::to_string(e));
  if (a.is_zero() || a.valuation() >= e) return PadicNumber::zero_at(a.backend(), a.absolute_precision());
  std::vector<Digit> d = a.digits();
  for (std::size_t i = static_cast<std::size_t>(e - a.valuation()); i < d.size(); ++i) d[i] = 0;
  return PadicNumber::from_digits(a.backend(), a.valuation(), std::move(d));
}

/// The p sub-balls of radius p^(e-1) of B(c, p^e), in ascending residue order.
inline std::vector<Ball<PadicNumber>> children(const Ball<PadicNumber>& b, std::int64_t working_precision) {
  const auto& f = b.center.backend();
  std::vector<Ball<PadicNumber>> out;
  out.reserve(f.p());
  for (Digit d = 0; d < f.p(); ++d) {
    if (d == 0) {
      out.push_back({b.center, b.radius_exp - 1});
      continue;
    }
    std::vector<Digit> digits(static_cast<std::size_t>(working_precision), 0);
    digits[0] = d;
    out.push_back({b.center + PadicNumber::from_digits(f, -b.radius_exp, std::move(digits)), b.radius_exp - 1});
  }
  return out;
}

/// Continuous extension of a bounded locally constant f from M to X.
///
/// With c = p^bound_exp and D(y) = p^delta the distance from y to M, put
/// m(y) = bound_exp - delta, so y lies in P_k = {D <= c p^-k} exactly when
/// m(y) >= k. Each y outside M is attached to the first ball of M at distance
/// D(y) (ascending order of the domain list), and
///
///   g_n(y) = f(y)                                     y in M
///          = 0                                        m(y) < 2
///          = class center of f(a(y)) mod c p^-k,      k = min(n, m(y) - 1)
///
/// so consecutive stages differ by at most c p^-n and the limit restricts to f.
class Extension {
 public:
  Extension(PresentedSpace space, PresentedFunction f) : space_(std::move(space)), f_(std::move(f)) { validate(); }

  const PresentedSpace& space() const { return space_; }
  const PresentedFunction& function() const { return f_; }

  /// g_n(x), n >= 1.
  PadicNumber eval(const PadicNumber& x, std::int64_t n) const {
    if (n < 1) fail(ErrorKind::InvalidArgument, "stage index must be >= 1");
    if (!space_.contains(x)) fail(ErrorKind::OutsideCarrier, "point outside the presented space");
    if (auto v = f_.at(x)) return *v;
    const auto [j, delta] = nearest(x);
    const std::int64_t m = f_.bound_exp - delta;
    if (m < 2) return PadicNumber::exact_zero(space_.backend());
    return class_center(f_.values[j], std::min(n, m - 1) - f_.bound_exp);
  }

  /// u_n on P_{n+1}: the class center of f at the attached ball, mod c p^-n.
  PadicNumber stage_value(const PadicNumber& x, std::int64_t n) const {
    const auto i = f_.domain.locate(x);
    const std::size_t j = i ? *i : nearest(x).first;
    return class_center(f_.values[j], n - f_.bound_exp);
  }

  /// P_{n+1} = {x : rho(x, M) <= c p^-(n+1)} as a ball union inside X.
  Partition<PadicNumber> neighbourhood(std::int64_t n) const {
    const std::int64_t rho = f_.bound_exp - n - 1;
    std::vector<Ball<PadicNumber>> balls;
    for (const auto& b : f_.domain.balls) {
      Ball<PadicNumber> v{b.center, std::max(b.radius_exp, rho)};
      const auto& host = space_.carrier.balls[*space_.carrier.locate(b.center)];
      if (host.radius_exp < v.radius_exp) v = host;
      balls.push_back(std::move(v));
    }
    Partition<PadicNumber> out;
    out.resolution = space_.resolution();
    for (std::size_t i = 0; i < balls.size(); ++i) {
      bool covered = false;
      for (std::size_t j = 0; j < balls.size() && !covered; ++j) {
        if (i == j) continue;
        const auto r = ball_relation(balls[i], balls[j]);
        covered = r == BallRelation::AinB || (r == BallRelation::Equal && j < i);
      }
      if (!covered) out.balls.push_back(balls[i]);
    }
    return out;
  }

  StageResult step(std::int64_t n) const {
    if (n < 1) fail(ErrorKind::InvalidArgument, "stage index must be >= 1");
    require_resolution(n);
    StageResult out;
    out.n = n;
    out.next = neighbourhood(n);
    out.u = tabulate(out.next.balls, [&](const PadicNumber& x) { return stage_value(x, n); });
    return out;
  }

  /// g_n as a ball -> value table over X. The table balls depend only on M.
  PresentedFunction stage(std::int64_t n) const {
    return tabulate(space_.carrier.balls, [&](const PadicNumber& x) { return eval(x, n); });
  }

  /// sup over X of |g_n - g_{n+1}|, exact: both stages are constant on the same table balls.
  NormExp stage_gap(std::int64_t n) const {
    const auto a = stage(n), b = stage(n + 1);
    NormExp gap = NormExp::zero();
    for (std::size_t i = 0; i < a.values.size(); ++i) gap = max(gap, distance(a.values[i], b.values[i]));
    return gap;
  }

  /// Stages 1..n_max-1 and the final g = g_{n_max}.
  std::pair<std::vector<StageResult>, PresentedFunction> run(std::int64_t n_max) const {
    if (n_max < 2) fail(ErrorKind::InvalidArgument, "n_max must be >= 2");
    std::vector<StageResult> steps;
    for (std::int64_t n = 1; n < n_max; ++n) steps.push_back(step(n));
    return {std::move(steps), stage(n_max)};
  }

 private:
  void validate() const {
    const auto& f = space_.backend();
    if (f_.values.size() != f_.domain.balls.size())
      fail(ErrorKind::InvalidArgument, "one value per domain ball required");
    if (f_.domain.balls.empty()) fail(ErrorKind::InvalidArgument, "empty domain");
    if (first_overlap(space_.carrier)) fail(ErrorKind::NotDisjoint, "carrier balls overlap");
    if (const auto o = first_overlap(f_.domain))
      fail(ErrorKind::NotDisjoint, "domain balls " + std::to_string(o->first) + " and " + std::to_string(o->second) + " overlap");
    for (const auto& b : space_.carrier.balls)
      if (b.radius_exp < -space_.resolution())
        fail(ErrorKind::ResolutionTooCoarse, "carrier ball finer than the declared resolution");
    for (std::size_t i = 0; i < f_.domain.balls.size(); ++i) {
      const auto& b = f_.domain.balls[i];
      if (!(b.center.backend() == f)) fail(ErrorKind::BackendMismatch, "domain ball over another field");
      if (b.radius_exp < -space_.resolution())
        fail(ErrorKind::ResolutionTooCoarse, "domain ball " + std::to_string(i) + " is finer than the carrier resolves");
      const auto host = space_.carrier.locate(b.center);
      if (!host) fail(ErrorKind::OutsideCarrier, "domain ball " + std::to_string(i) + " outside the space");
      if (space_.carrier.balls[*host].radius_exp < b.radius_exp)
        fail(ErrorKind::OutsideCarrier, "domain ball " + std::to_string(i) + " exceeds its carrier ball");
      if (f_.values[i].norm() > f_.bound())
        fail(ErrorKind::InvalidArgument, "value on ball " + std::to_string(i) + " exceeds the bound p^" + std::to_string(f_.bound_exp));
    }
  }

  void require_resolution(std::int64_t n) const {
    if (f_.bound_exp - (n + 1) < -space_.resolution())
      fail(ErrorKind::ResolutionTooCoarse, "c p^-" + std::to_string(n + 1) + " is below the carrier resolution p^-" +
                                               std::to_string(space_.resolution()));
  }

  /// (index of the attached domain ball, exponent of the distance to M), x outside M.
  std::pair<std::size_t, std::int64_t> nearest(const PadicNumber& x) const {
    std::size_t best = 0;
    NormExp d = NormExp::zero();
    for (std::size_t j = 0; j < f_.domain.balls.size(); ++j) {
      const NormExp dj = distance(x, f_.domain.balls[j].center);
      if (j == 0 || dj < d) {
        d = dj;
        best = j;
      }
    }
    return {best, d.exponent()};
  }

  /// Splits `roots` until every ball is inside one domain ball or disjoint from all.
  template <class Fn>
  PresentedFunction tabulate(const std::vector<Ball<PadicNumber>>& roots, Fn&& value) const {
    PresentedFunction out;
    out.bound_exp = f_.bound_exp;
    out.domain.resolution = space_.resolution();
    std::vector<Ball<PadicNumber>> stack(roots.rbegin(), roots.rend());
    while (!stack.empty()) {
      Ball<PadicNumber> b = std::move(stack.back());
      stack.pop_back();
      bool split = false, inside = false;
      for (const auto& m : f_.domain.balls) {
        const auto r = ball_relation(b, m);
        if (r == BallRelation::AinB || r == BallRelation::Equal) inside = true;
        if (r == BallRelation::BinA) split = true;
      }
      if (split && !inside) {
        if (b.radius_exp - 1 < -space_.resolution())
          fail(ErrorKind::ResolutionTooCoarse, "cannot refine below p^-" + std::to_string(space_.resolution()));
        auto kids = children(b, space_.working_precision);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(std::move(*it));
        continue;
      }
      out.values.push_back(value(b.center));
      out.domain.balls.push_back(std::move(b));
    }
    return out;
  }

  PresentedSpace space_;
  PresentedFunction f_;
};

inline StageResult extend_step(const PresentedFunction& f, const PresentedSpace& X, std::int64_t n) {
  return Extension(X, f).step(n);
}

/// g = g_{n_max}, accurate to c p^-n_max; equal to f on M.
inline PresentedFunction extend(const PresentedFunction& f, const PresentedSpace& X, std::int64_t n_max) {
  if (n_max < 2) fail(ErrorKind::InvalidArgument, "n_max must be >= 2");
  const Extension e(X, f);
  for (std::int64_t n = 1; n < n_max; ++n) e.step(n);
  return e.stage(n_max);
}

}  // namespace nahomeo
