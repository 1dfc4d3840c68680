#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nahomeo/ball.hpp"
#include "nahomeo/seq.hpp"

namespace nahomeo {

/// Deterministic generator used by suites and tests. The stream for a
/// given seed is fixed by std::mt19937_64.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin() { return uniform(0, 1) == 1; }

  /// Nonzero element with valuation in [vlo, vhi] and n_digits random digits.
  PadicNumber nonzero(const FieldBackend& f, std::int64_t vlo, std::int64_t vhi, std::int64_t n_digits) {
    std::vector<Digit> d(static_cast<std::size_t>(n_digits));
    d[0] = static_cast<Digit>(uniform(1, f.p() - 1));
    for (std::size_t i = 1; i < d.size(); ++i) d[i] = static_cast<Digit>(uniform(0, f.p() - 1));
    return PadicNumber::from_digits(f, uniform(vlo, vhi), std::move(d));
  }

  /// Element of valuation exactly v (a unit times u^v).
  PadicNumber with_valuation(const FieldBackend& f, std::int64_t v, std::int64_t n_digits) {
    return nonzero(f, v, v, n_digits);
  }

  /// Point of the ball: center + u^(-radius_exp) * (random element of B(0,1)).
  PadicNumber in_ball(const Ball<PadicNumber>& b, std::int64_t n_digits) {
    const auto& f = b.center.backend();
    if (uniform(0, 7) == 0) return b.center;
    return b.center + shift(nonzero(f, 0, 6, n_digits), -b.radius_exp);
  }

  /// Element of B(0,1) \ {1}: either valuation >= 1, or a unit whose difference from 1
  /// has valuation in [1, max_gap] (never 1 at certified precision).
  PadicNumber punctured_ball(const FieldBackend& f, std::int64_t n_digits, std::int64_t max_gap) {
    const std::int64_t pick = uniform(0, 3);
    if (pick == 0) return nonzero(f, 1, 3, n_digits);
    if (pick == 1 && f.p() > 2) {
      // unit not congruent to 1 mod u
      std::vector<Digit> d(static_cast<std::size_t>(n_digits));
      d[0] = static_cast<Digit>(uniform(2, f.p() - 1));
      for (std::size_t i = 1; i < d.size(); ++i) d[i] = static_cast<Digit>(uniform(0, f.p() - 1));
      return PadicNumber::from_digits(f, 0, std::move(d));
    }
    return one(f, n_digits) - with_valuation(f, uniform(1, max_gap), n_digits);
  }

  /// Random c0 vector with a prefix of `len` coordinates of valuation in [vlo, vhi]
  /// (some of them exact zeros) and a random catalog tail.
  SeqVector c0_vector(const FieldBackend& f, std::size_t len, std::int64_t vlo, std::int64_t vhi,
                      std::int64_t n_digits) {
    std::vector<PadicNumber> pre;
    pre.reserve(len);
    for (std::size_t i = 0; i < len; ++i)
      pre.push_back(uniform(0, 5) == 0 ? PadicNumber::exact_zero(f) : nonzero(f, vlo, vhi, n_digits));
    TailRule tail = ZeroTail{};
    switch (uniform(0, 3)) {
      case 1: tail = GeomDiffTail{nonzero(f, vlo, vhi, n_digits), nonzero(f, 1, 2, n_digits)}; break;
      case 2: tail = GeometricTail{nonzero(f, vlo, vhi, n_digits), nonzero(f, 1, 2, n_digits)}; break;
      case 3: tail = ConstMinusGeomTail{PadicNumber::exact_zero(f), nonzero(f, vlo, vhi, n_digits), nonzero(f, 1, 2, n_digits)}; break;
      default: break;
    }
    return SeqVector(f, std::move(pre), std::move(tail), SpaceTag::c0);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace nahomeo
