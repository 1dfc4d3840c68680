#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nahomeo/padic.hpp"

namespace nahomeo {

/// A point of a sequence space truncated to a fixed depth, with the sup metric.
using FinitePoint = std::vector<PadicNumber>;

inline NormExp point_distance(const PadicNumber& a, const PadicNumber& b) { return distance(a, b); }

inline NormExp point_distance(const FinitePoint& a, const FinitePoint& b) {
  if (a.size() != b.size()) fail(ErrorKind::InvalidArgument, "points of different depth");
  NormExp d = NormExp::zero();
  for (std::size_t i = 0; i < a.size(); ++i) d = max(d, distance(a[i], b[i]));
  return d;
}

/// to + u^k (x - from), the affine map carrying a ball at `from` to one at `to`.
inline PadicNumber affine_image(const PadicNumber& x, const PadicNumber& from, const PadicNumber& to,
                                std::int64_t k) {
  return to + shift(x - from, k);
}

inline FinitePoint affine_image(const FinitePoint& x, const FinitePoint& from, const FinitePoint& to,
                                std::int64_t k) {
  FinitePoint out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(to[i] + shift(x[i] - from[i], k));
  return out;
}

inline const FieldBackend& point_backend(const PadicNumber& x) { return x.backend(); }
inline const FieldBackend& point_backend(const FinitePoint& x) {
  if (x.empty()) fail(ErrorKind::InvalidArgument, "empty point");
  return x.front().backend();
}

/// Closed (and open) ball {y : |y - center| <= p^radius_exp}.
template <class Point>
struct Ball {
  Point center;
  std::int64_t radius_exp = 0;

  NormExp radius() const { return NormExp::power(radius_exp); }
  bool contains(const Point& x) const { return point_distance(center, x) <= radius(); }
};

enum class BallRelation { Disjoint, AinB, BinA, Equal };

inline std::string_view to_string(BallRelation r) {
  switch (r) {
    case BallRelation::Disjoint: return "disjoint";
    case BallRelation::AinB: return "a_in_b";
    case BallRelation::BinA: return "b_in_a";
    case BallRelation::Equal: return "equal";
  }
  return "?";
}

/// Any two balls are disjoint or nested; the center distance against the
/// larger radius decides which.
template <class Point>
BallRelation ball_relation(const Ball<Point>& a, const Ball<Point>& b) {
  const NormExp d = point_distance(a.center, b.center);
  if (d > max(a.radius(), b.radius())) return BallRelation::Disjoint;
  if (a.radius_exp == b.radius_exp) return BallRelation::Equal;
  return a.radius_exp < b.radius_exp ? BallRelation::AinB : BallRelation::BinA;
}

/// Finite list of clopen balls refined to a declared level.
template <class Point>
struct Partition {
  std::vector<Ball<Point>> balls;
  std::int64_t resolution = 0;

  /// Index of the first ball containing x.
  std::optional<std::size_t> locate(const Point& x) const {
    for (std::size_t i = 0; i < balls.size(); ++i)
      if (balls[i].contains(x)) return i;
    return std::nullopt;
  }
  bool covers(const Point& x) const { return locate(x).has_value(); }
};

/// Checks pairwise disjointness; returns the first intersecting pair.
template <class Point>
std::optional<std::pair<std::size_t, std::size_t>> first_overlap(const Partition<Point>& p) {
  for (std::size_t i = 0; i < p.balls.size(); ++i)
    for (std::size_t j = i + 1; j < p.balls.size(); ++j)
      if (ball_relation(p.balls[i], p.balls[j]) != BallRelation::Disjoint) return std::make_pair(i, j);
  return std::nullopt;
}

struct MinDistance {
  /// Certified lower bound: the smallest radius among the balls.
  NormExp bound;
  /// Distance of an exhibited pair of points (the closest centers).
  NormExp witness;
  std::size_t a_index = 0, b_index = 0;
};

/// Lower bound on inf |x - y| over x in A, y in B. For disjoint balls every
/// cross pair sits at exactly the center distance, which is the witness.
template <class Point>
MinDistance set_min_distance(const Partition<Point>& A, const Partition<Point>& B) {
  if (A.balls.empty() || B.balls.empty()) fail(ErrorKind::InvalidArgument, "empty ball family");
  MinDistance out;
  bool first = true;
  std::int64_t min_radius = A.balls.front().radius_exp;
  for (const auto& b : A.balls) min_radius = std::min(min_radius, b.radius_exp);
  for (const auto& b : B.balls) min_radius = std::min(min_radius, b.radius_exp);
  for (std::size_t i = 0; i < A.balls.size(); ++i) {
    for (std::size_t j = 0; j < B.balls.size(); ++j) {
      if (ball_relation(A.balls[i], B.balls[j]) != BallRelation::Disjoint)
        fail(ErrorKind::NotDisjoint, "ball " + std::to_string(i) + " of A meets ball " + std::to_string(j) + " of B");
      const NormExp d = point_distance(A.balls[i].center, B.balls[j].center);
      if (first || d < out.witness) {
        out.witness = d;
        out.a_index = i;
        out.b_index = j;
        first = false;
      }
    }
  }
  out.bound = NormExp::power(min_radius);
  return out;
}

/// dist(x, ball) <= r, using that x outside a ball sees every point of it at |x - center|.
template <class Point>
bool within(const Ball<Point>& ball, const Point& x, NormExp r) {
  return point_distance(ball.center, x) <= max(ball.radius(), r);
}

/// Separation function: b_k on the r-neighbourhood of A_k, and the value of the
/// last set elsewhere. The neighbourhoods are pairwise disjoint when r is below
/// the separation of the sets, so the result is locally constant at scale r.
template <class Point>
class Urysohn {
 public:
  using Entry = std::pair<Partition<Point>, PadicNumber>;

  /// r defaults to (separation)/p.
  explicit Urysohn(std::vector<Entry> sets, std::optional<NormExp> r = std::nullopt) : sets_(std::move(sets)) {
    if (sets_.size() < 2) fail(ErrorKind::InvalidArgument, "need at least two sets");
    separation_ = NormExp::zero();
    bool first = true;
    for (std::size_t i = 0; i < sets_.size(); ++i)
      for (std::size_t j = i + 1; j < sets_.size(); ++j) {
        const NormExp d = set_min_distance(sets_[i].first, sets_[j].first).witness;
        if (first || d < separation_) separation_ = d;
        first = false;
      }
    if (separation_.is_zero()) fail(ErrorKind::SeparationTooSmall, "sets are not separated");
    r_ = r ? *r : NormExp::power(separation_.exponent() - 1);
    if (!(r_ < separation_))
      fail(ErrorKind::SeparationTooSmall, "r = " + r_.to_string() + " is not below separation " + separation_.to_string());
    if (r_.is_zero()) fail(ErrorKind::SeparationTooSmall, "r must be positive");
  }

  NormExp separation() const { return separation_; }
  NormExp r() const { return r_; }

  /// Index of the neighbourhood containing x, or the last index.
  std::size_t region(const Point& x) const {
    for (std::size_t k = 0; k + 1 < sets_.size(); ++k)
      for (const auto& ball : sets_[k].first.balls)
        if (within(ball, x, r_)) return k;
    return sets_.size() - 1;
  }

  const PadicNumber& operator()(const Point& x) const { return sets_[region(x)].second; }

 private:
  std::vector<Entry> sets_;
  NormExp separation_;
  NormExp r_;
};

template <class Point>
PadicNumber urysohn(const std::vector<typename Urysohn<Point>::Entry>& sets, const Point& x,
                    std::optional<NormExp> r = std::nullopt) {
  return Urysohn<Point>(sets, r)(x);
}

/// Affine transport of x from its src ball to the paired dst ball:
/// y = c_dst + u^(e_src - e_dst) (x - c_src).
template <class Point>
Point ball_transport(const Partition<Point>& src, const Partition<Point>& dst, const std::vector<std::size_t>& pairing,
                     const Point& x) {
  if (pairing.size() != src.balls.size()) fail(ErrorKind::InvalidArgument, "pairing must cover every source ball");
  const auto i = src.locate(x);
  if (!i) fail(ErrorKind::OutsideCarrier, "point not covered at resolution " + std::to_string(src.resolution));
  const std::size_t j = pairing[*i];
  if (j >= dst.balls.size()) fail(ErrorKind::InvalidArgument, "pairing index out of range");
  const auto& a = src.balls[*i];
  const auto& b = dst.balls[j];
  return affine_image(x, a.center, b.center, a.radius_exp - b.radius_exp);
}

/// Inverse permutation of a pairing; throws unless it is a bijection.
inline std::vector<std::size_t> inverse_pairing(const std::vector<std::size_t>& pairing) {
  std::vector<std::size_t> inv(pairing.size(), pairing.size());
  for (std::size_t i = 0; i < pairing.size(); ++i) {
    if (pairing[i] >= pairing.size() || inv[pairing[i]] != pairing.size())
      fail(ErrorKind::InvalidArgument, "pairing is not a bijection");
    inv[pairing[i]] = i;
  }
  return inv;
}

}  // namespace nahomeo
