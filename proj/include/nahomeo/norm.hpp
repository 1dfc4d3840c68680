#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace nahomeo {

/// An exact norm value in the value group {p^e : e in Z} together with zero.
///
/// Norms of nonzero elements are never stored as floating point; `exponent()`
/// is the integer e with |x| = p^e, so an element of valuation v has exponent -v.
class NormExp {
 public:
  constexpr NormExp() = default;  // ZERO

  static constexpr NormExp zero() { return NormExp(); }
  static constexpr NormExp power(std::int64_t e) { return NormExp(false, e); }

  constexpr bool is_zero() const { return zero_; }
  constexpr std::int64_t exponent() const { return exp_; }

  friend constexpr bool operator==(const NormExp& a, const NormExp& b) {
    return a.zero_ == b.zero_ && (a.zero_ || a.exp_ == b.exp_);
  }
  friend constexpr std::strong_ordering operator<=>(const NormExp& a, const NormExp& b) {
    if (a.zero_ || b.zero_) return b.zero_ <=> a.zero_;
    return a.exp_ <=> b.exp_;
  }

  /// Multiplication of norms: exponents add, ZERO absorbs.
  friend constexpr NormExp operator*(const NormExp& a, const NormExp& b) {
    if (a.zero_ || b.zero_) return zero();
    return power(a.exp_ + b.exp_);
  }

  /// Division by a nonzero norm.
  friend constexpr NormExp operator/(const NormExp& a, const NormExp& b) {
    if (a.zero_) return zero();
    return power(a.exp_ - b.exp_);
  }

  std::string to_string() const {
    return zero_ ? std::string("ZERO") : "p^" + std::to_string(exp_);
  }

 private:
  constexpr NormExp(bool z, std::int64_t e) : zero_(z), exp_(e) {}

  bool zero_ = true;
  std::int64_t exp_ = 0;
};

constexpr NormExp max(const NormExp& a, const NormExp& b) { return a < b ? b : a; }
constexpr NormExp min(const NormExp& a, const NormExp& b) { return a < b ? a : b; }

}  // namespace nahomeo
