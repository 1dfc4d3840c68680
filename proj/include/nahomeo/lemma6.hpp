#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "nahomeo/ball.hpp"

namespace nahomeo {

// Canonical enumeration of the two ball decompositions
//
//   K             = B(0,1)  u  U_{n>=0} {|x| = p^(n+1)}
//   B(0,1) \ {1}  =          U_{n>=0} {|y - 1| = p^-n}
//
// refined into residue balls. Index 0 on the K side is B(0,1); index
// 1 + n(p-1) + (a-1) is the ball a u^-(n+1) + B(0, p^n). On the punctured side
// index n(p-1) + (a-1) is the ball 1 + a u^n + B(0, p^(-n-1)). Both run
// annulus-major, residue-minor, ascending; the pairing of indices is the identity.

class Lemma6 {
 public:
  /// `levels` bounds the K-side annuli that are resolved: |x| <= p^levels.
  Lemma6(FieldBackend backend, std::int64_t levels, std::int64_t precision = 32)
      : backend_(backend), levels_(levels), precision_(precision) {
    if (levels < 1) fail(ErrorKind::InvalidArgument, "levels must be >= 1");
    if (precision < 1) fail(ErrorKind::InvalidArgument, "precision must be >= 1");
  }

  const FieldBackend& backend() const { return backend_; }
  std::int64_t levels() const { return levels_; }

  /// Number of resolved balls on each side.
  std::size_t size() const { return 1 + static_cast<std::size_t>(levels_) * residues(); }

  Ball<PadicNumber> k_ball(std::size_t index) const {
    if (index == 0) return {PadicNumber::exact_zero(backend_), 0};
    const auto [n, a] = split(index - 1);
    return {digit_power(a, -(n + 1)), n};
  }

  Ball<PadicNumber> punctured_ball(std::size_t index) const {
    const auto [n, a] = split(index);
    return {one(backend_, precision_ + n + 1) + digit_power(a, n), -n - 1};
  }

  Partition<PadicNumber> k_partition() const { return partition(true); }
  Partition<PadicNumber> punctured_partition() const { return partition(false); }

  /// K-side ball index of x.
  std::size_t k_index(const PadicNumber& x) const {
    if (x.norm() <= NormExp::power(0)) {
      if (x.is_zero() && x.absolute_precision() < 0)
        fail(ErrorKind::UnresolvedAtLevel, "value is only known modulo u^" + std::to_string(x.absolute_precision()));
      return 0;
    }
    const std::int64_t n = -x.valuation() - 1;
    if (n >= levels_) fail(ErrorKind::UnresolvedAtLevel, "|x| = " + x.norm().to_string() + " beyond " + std::to_string(levels_) + " levels");
    return 1 + static_cast<std::size_t>(n) * residues() + (x.digits().front() - 1);
  }

  /// Punctured-side ball index of y in B(0,1) \ {1}.
  std::size_t punctured_index(const PadicNumber& y) const {
    if (y.norm() > NormExp::power(0)) fail(ErrorKind::DomainError, "y is outside B(0,1)");
    const PadicNumber g = y - one_like(y);
    if (g.is_zero()) fail(ErrorKind::UnresolvedAtLevel, "y agrees with 1 to certified precision");
    const std::int64_t n = g.valuation();
    const std::size_t index = static_cast<std::size_t>(n) * residues() + (g.digits().front() - 1);
    if (index >= size()) fail(ErrorKind::UnresolvedAtLevel, "|y - 1| = " + g.norm().to_string() + " beyond resolved levels");
    return index;
  }

  /// phi: K -> B(0,1) \ {1}, affine on each ball.
  PadicNumber forward(const PadicNumber& x) const {
    const std::size_t i = k_index(x);
    const auto src = k_ball(i), dst = punctured_ball(i);
    return affine_image(x, src.center, dst.center, src.radius_exp - dst.radius_exp);
  }

  PadicNumber inverse(const PadicNumber& y) const {
    const std::size_t i = punctured_index(y);
    const auto src = punctured_ball(i), dst = k_ball(i);
    return affine_image(y, src.center, dst.center, src.radius_exp - dst.radius_exp);
  }

 private:
  std::size_t residues() const { return backend_.p() - 1; }

  /// index -> (annulus n, residue a in 1..p-1)
  std::pair<std::int64_t, Digit> split(std::size_t i) const {
    return {static_cast<std::int64_t>(i / residues()), static_cast<Digit>(i % residues() + 1)};
  }

  /// a u^e, exact at the working precision.
  PadicNumber digit_power(Digit a, std::int64_t e) const {
    std::vector<Digit> d(static_cast<std::size_t>(precision_), 0);
    d[0] = a;
    return PadicNumber::from_digits(backend_, e, std::move(d));
  }

  Partition<PadicNumber> partition(bool k_side) const {
    Partition<PadicNumber> out;
    out.resolution = levels_;
    out.balls.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.balls.push_back(k_side ? k_ball(i) : punctured_ball(i));
    return out;
  }

  FieldBackend backend_;
  std::int64_t levels_;
  std::int64_t precision_;
};

enum class Direction { Forward, Inverse };

inline PadicNumber lemma6_phi(const PadicNumber& x, Direction direction, std::int64_t levels) {
  const Lemma6 l(x.backend(), levels, std::max<std::int64_t>(x.precision(), 32));
  return direction == Direction::Forward ? l.forward(x) : l.inverse(x);
}

/// Canonical text key of a ball: radius exponent and the nonzero digits of
/// the center below exponent -radius_exp. Equal balls give equal keys.
inline std::string ball_key(const Ball<PadicNumber>& b) {
  const std::int64_t cut = -b.radius_exp;
  std::string key = std::to_string(b.radius_exp) + ":";
  if (b.center.is_zero()) return key;
  for (std::int64_t e = b.center.valuation(); e < cut; ++e)
    if (const Digit d = b.center.digit_at(e)) key += std::to_string(e) + "=" + std::to_string(d) + ",";
  return key;
}

/// Checks by brute force that indices 0..count-1 map to pairwise distinct
/// punctured-side balls. Returns the first colliding index pair if any.
inline std::optional<std::pair<std::size_t, std::size_t>> lemma6_collision(const Lemma6& l, std::size_t count) {
  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto [it, inserted] = seen.emplace(ball_key(l.punctured_ball(i)), i);
    if (!inserted) return std::make_pair(it->second, i);
  }
  return std::nullopt;
}

}  // namespace nahomeo
