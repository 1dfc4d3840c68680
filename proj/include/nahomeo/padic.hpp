#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nahomeo/error.hpp"
#include "nahomeo/norm.hpp"

namespace nahomeo {

using Digit = std::uint32_t;

enum class FieldKind { Qp, FpLaurent };

/// Selects the local field: Q_p (carry-propagating base-p digits) or
/// F_p((theta)) (carry-free coefficients in F_p). The uniformizer is p or theta.
class FieldBackend {
 public:
  // Digit products are accumulated in 64 bits, which bounds the prime.
  static constexpr std::uint32_t kMaxPrime = 65521;

  FieldBackend(FieldKind kind, std::uint32_t p) : kind_(kind), p_(p) {
    if (!is_prime(p)) fail(ErrorKind::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
    if (p > kMaxPrime) fail(ErrorKind::InvalidArgument, "p exceeds supported bound 65521");
  }

  static FieldBackend qp(std::uint32_t p) { return {FieldKind::Qp, p}; }
  static FieldBackend fp_laurent(std::uint32_t p) { return {FieldKind::FpLaurent, p}; }

  FieldKind kind() const { return kind_; }
  std::uint32_t p() const { return p_; }
  bool carries() const { return kind_ == FieldKind::Qp; }

  std::string name() const {
    return (kind_ == FieldKind::Qp ? "Q_" : "F_") + std::to_string(p_) +
           (kind_ == FieldKind::Qp ? "" : "((theta))");
  }

  friend bool operator==(const FieldBackend&, const FieldBackend&) = default;

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  FieldKind kind_;
  std::uint32_t p_;
};

namespace detail {

inline Digit inverse_mod_prime(Digit a, Digit p) {
  // Extended Euclid on small integers.
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (t < 0) t += p;
  return static_cast<Digit>(t);
}

/// a + b over `len` digits (both already aligned and at least `len` long).
inline std::vector<Digit> add_digits(const FieldBackend& f, const std::vector<Digit>& a,
                                     const std::vector<Digit>& b, std::size_t len) {
  std::vector<Digit> out(len);
  const std::uint64_t p = f.p();
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < len; ++i) {
    std::uint64_t s = std::uint64_t{a[i]} + b[i] + carry;
    out[i] = static_cast<Digit>(s % p);
    carry = f.carries() ? s / p : 0;
  }
  return out;
}

/// -a modulo (uniformizer)^len.
inline std::vector<Digit> neg_digits(const FieldBackend& f, const std::vector<Digit>& a) {
  std::vector<Digit> out(a.size());
  const Digit p = f.p();
  if (!f.carries()) {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (p - a[i]) % p;
    return out;
  }
  std::size_t i = 0;
  while (i < a.size() && a[i] == 0) ++i;
  if (i == a.size()) return out;
  out[i] = p - a[i];
  for (++i; i < a.size(); ++i) out[i] = p - 1 - a[i];
  return out;
}

/// a * b truncated to `len` digits.
inline std::vector<Digit> mul_digits(const FieldBackend& f, const std::vector<Digit>& a,
                                     const std::vector<Digit>& b, std::size_t len) {
  const std::uint64_t p = f.p();
  // Column sums stay exact: each product is below 2^32 for p <= kMaxPrime.
  std::vector<std::uint64_t> col(len, 0);
  for (std::size_t i = 0; i < std::min(len, a.size()); ++i) {
    if (a[i] == 0) continue;
    const std::size_t jmax = std::min(b.size(), len - i);
    for (std::size_t j = 0; j < jmax; ++j) col[i + j] += std::uint64_t{a[i]} * b[j];
  }
  std::vector<Digit> out(len);
  std::uint64_t carry = 0;
  for (std::size_t k = 0; k < len; ++k) {
    const std::uint64_t s = col[k] + carry;
    out[k] = static_cast<Digit>(s % p);
    carry = f.carries() ? s / p : 0;
  }
  return out;
}

/// a / b for a unit b (b[0] != 0), both given to at least `len` digits.
inline std::vector<Digit> div_digits(const FieldBackend& f, std::vector<Digit> a,
                                     const std::vector<Digit>& b, std::size_t len) {
  const Digit p = f.p();
  const Digit b0_inv = inverse_mod_prime(b[0], p);
  a.resize(len, 0);
  std::vector<Digit> q(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    if (a[i] == 0) continue;
    const Digit qi = static_cast<Digit>(std::uint64_t{a[i]} * b0_inv % p);
    q[i] = qi;
    // a -= qi * b * u^i on digits [i, len).
    std::uint64_t carry = 0;
    Digit borrow = 0;
    for (std::size_t k = i; k < len; ++k) {
      const std::size_t bj = k - i;
      const std::uint64_t prod = (bj < b.size() ? std::uint64_t{qi} * b[bj] : 0) + carry;
      const auto pd = static_cast<std::int64_t>(prod % p);
      if (f.carries()) {
        carry = prod / p;
        std::int64_t d = std::int64_t{a[k]} - pd - borrow;
        borrow = d < 0 ? 1 : 0;
        a[k] = static_cast<Digit>(d < 0 ? d + p : d);
      } else {
        a[k] = static_cast<Digit>((std::int64_t{a[k]} + p - pd) % p);
      }
    }
  }
  return q;
}

}  // namespace detail

/// An element of Q_p or F_p((theta)) known to a certified relative precision.
///
/// A nonzero value is u^v * (d_0 + d_1 u + ... + d_{N-1} u^{N-1}) + O(u^{v+N})
/// with d_0 != 0, where u is the uniformizer. A zero value is either exact or
/// "zero at precision": known only to be divisible by u^A, where A is the
/// absolute bound. The two zero states are never conflated.
class PadicNumber {
 public:
  static constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max();

  /// Exact zero over `backend`.
  static PadicNumber exact_zero(const FieldBackend& backend) { return PadicNumber(backend); }

  /// A value known only to lie in u^A * (unit ball).
  static PadicNumber zero_at(const FieldBackend& backend, std::int64_t absolute_bound) {
    PadicNumber z(backend);
    z.bound_ = absolute_bound;
    return z;
  }

  /// Builds u^valuation * sum digits[i] u^i. Leading zero digits are absorbed
  /// into the valuation; an all-zero digit string is zero at precision.
  static PadicNumber from_digits(const FieldBackend& backend, std::int64_t valuation,
                                 std::vector<Digit> digits) {
    for (Digit d : digits)
      if (d >= backend.p()) fail(ErrorKind::InvalidArgument, "digit out of range [0, p)");
    const std::size_t len = digits.size();
    std::size_t z = 0;
    while (z < len && digits[z] == 0) ++z;
    if (z == len) return zero_at(backend, valuation + static_cast<std::int64_t>(len));
    PadicNumber x(backend);
    x.zero_ = false;
    x.bound_ = valuation + static_cast<std::int64_t>(z);
    x.digits_.assign(digits.begin() + static_cast<std::ptrdiff_t>(z), digits.end());
    return x;
  }

  const FieldBackend& backend() const { return backend_; }
  bool is_zero() const { return zero_; }
  bool is_exact_zero() const { return zero_ && bound_ == kExact; }

  /// Valuation of a nonzero value.
  std::int64_t valuation() const {
    if (zero_) fail(ErrorKind::PrecisionExhausted, "valuation of a zero value");
    return bound_;
  }
  /// Relative precision N; 0 for zero values.
  std::int64_t precision() const { return zero_ ? 0 : static_cast<std::int64_t>(digits_.size()); }
  /// v + N for nonzero values, the divisibility bound for zero, kExact for exact zero.
  std::int64_t absolute_precision() const {
    return zero_ ? bound_ : bound_ + static_cast<std::int64_t>(digits_.size());
  }
  const std::vector<Digit>& digits() const { return digits_; }

  /// Digit of u^e; 0 below the valuation. Requires e < absolute_precision().
  Digit digit_at(std::int64_t e) const {
    if (e >= absolute_precision()) fail(ErrorKind::PrecisionExhausted, "digit beyond certified precision");
    if (zero_ || e < bound_) return 0;
    return digits_[static_cast<std::size_t>(e - bound_)];
  }

  NormExp norm() const { return zero_ ? NormExp::zero() : NormExp::power(-bound_); }

  /// True when the value is a unit (norm exactly 1).
  bool is_unit() const { return !zero_ && bound_ == 0; }

  std::string to_string() const {
    std::ostringstream os;
    if (zero_) {
      if (bound_ == kExact) return "0";
      os << "O(u^" << bound_ << ")";
      return os.str();
    }
    os << "u^" << bound_ << "*[";
    for (std::size_t i = 0; i < digits_.size(); ++i) os << (i ? "," : "") << digits_[i];
    os << "]";
    return os.str();
  }

  /// Structural identity (same certified digits and precision state).
  friend bool operator==(const PadicNumber& a, const PadicNumber& b) {
    return a.backend_ == b.backend_ && a.zero_ == b.zero_ && a.bound_ == b.bound_ &&
           a.digits_ == b.digits_;
  }

 private:
  explicit PadicNumber(const FieldBackend& backend) : backend_(backend) {}

  FieldBackend backend_;
  bool zero_ = true;
  std::int64_t bound_ = kExact;  // valuation when nonzero, absolute bound when zero
  std::vector<Digit> digits_;
};

inline void require_same_backend(const PadicNumber& a, const PadicNumber& b) {
  if (!(a.backend() == b.backend()))
    fail(ErrorKind::BackendMismatch, a.backend().name() + " vs " + b.backend().name());
}

/// Reduces the absolute precision of `a` to at most `bound`.
inline PadicNumber truncate_absolute(const PadicNumber& a, std::int64_t bound) {
  if (bound >= a.absolute_precision()) return a;
  if (a.is_zero()) return PadicNumber::zero_at(a.backend(), bound);
  const std::int64_t v = a.valuation();
  if (bound <= v) return PadicNumber::zero_at(a.backend(), bound);
  std::vector<Digit> d(a.digits().begin(), a.digits().begin() + (bound - v));
  return PadicNumber::from_digits(a.backend(), v, std::move(d));
}

/// Re-expresses `a` with relative precision at most n (n >= 1).
inline PadicNumber truncate_relative(const PadicNumber& a, std::int64_t n) {
  if (a.is_zero() || n >= a.precision()) return a;
  return truncate_absolute(a, a.valuation() + n);
}

/// Image of the integer n in the field, to relative precision n_digits.
inline PadicNumber from_integer(std::int64_t n, const FieldBackend& backend, std::int64_t n_digits) {
  if (n_digits < 1) fail(ErrorKind::InvalidArgument, "precision must be >= 1");
  const std::int64_t p = backend.p();
  if (backend.kind() == FieldKind::FpLaurent) {
    std::int64_t r = ((n % p) + p) % p;
    if (r == 0) return PadicNumber::exact_zero(backend);
    std::vector<Digit> d(static_cast<std::size_t>(n_digits), 0);
    d[0] = static_cast<Digit>(r);
    return PadicNumber::from_digits(backend, 0, std::move(d));
  }
  if (n == 0) return PadicNumber::exact_zero(backend);
  const bool negative = n < 0;
  // Work with the magnitude as unsigned to cover INT64_MIN.
  std::uint64_t m = negative ? ~static_cast<std::uint64_t>(n) + 1 : static_cast<std::uint64_t>(n);
  std::int64_t v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  std::vector<Digit> d(static_cast<std::size_t>(n_digits), 0);
  for (std::size_t i = 0; i < d.size() && m != 0; ++i) {
    d[i] = static_cast<Digit>(m % p);
    m /= p;
  }
  if (negative) d = detail::neg_digits(backend, d);
  return PadicNumber::from_digits(backend, v, std::move(d));
}

/// u^k with relative precision n_digits (u = p or theta).
inline PadicNumber uniformizer_power(const FieldBackend& backend, std::int64_t k, std::int64_t n_digits) {
  std::vector<Digit> d(static_cast<std::size_t>(n_digits), 0);
  d[0] = 1;
  return PadicNumber::from_digits(backend, k, std::move(d));
}

inline PadicNumber one(const FieldBackend& backend, std::int64_t n_digits) {
  return uniformizer_power(backend, 0, n_digits);
}

/// 1 carried to the absolute precision of x (at least one digit).
inline PadicNumber one_like(const PadicNumber& x) {
  const std::int64_t bound = x.is_exact_zero() ? 1 : x.absolute_precision();
  return one(x.backend(), std::max<std::int64_t>(bound, 1));
}

inline PadicNumber negate(const PadicNumber& a) {
  if (a.is_zero()) return a;
  return PadicNumber::from_digits(a.backend(), a.valuation(), detail::neg_digits(a.backend(), a.digits()));
}

/// Sum at the largest common certified absolute precision.
inline PadicNumber add(const PadicNumber& a, const PadicNumber& b) {
  require_same_backend(a, b);
  const std::int64_t bound = std::min(a.absolute_precision(), b.absolute_precision());
  if (a.is_zero() && b.is_zero()) {
    return bound == PadicNumber::kExact ? PadicNumber::exact_zero(a.backend())
                                        : PadicNumber::zero_at(a.backend(), bound);
  }
  if (a.is_zero()) return truncate_absolute(b, bound);
  if (b.is_zero()) return truncate_absolute(a, bound);

  const std::int64_t v = std::min(a.valuation(), b.valuation());
  const auto len = static_cast<std::size_t>(bound - v);
  auto aligned = [&](const PadicNumber& x) {
    std::vector<Digit> d(len, 0);
    const auto off = static_cast<std::size_t>(x.valuation() - v);
    for (std::size_t i = 0; i < x.digits().size() && off + i < len; ++i) d[off + i] = x.digits()[i];
    return d;
  };
  return PadicNumber::from_digits(a.backend(), v, detail::add_digits(a.backend(), aligned(a), aligned(b), len));
}

inline PadicNumber sub(const PadicNumber& a, const PadicNumber& b) { return add(a, negate(b)); }

inline PadicNumber mul(const PadicNumber& a, const PadicNumber& b) {
  require_same_backend(a, b);
  if (a.is_exact_zero() || b.is_exact_zero()) return PadicNumber::exact_zero(a.backend());
  if (a.is_zero() && b.is_zero())
    return PadicNumber::zero_at(a.backend(), a.absolute_precision() + b.absolute_precision());
  if (a.is_zero()) return PadicNumber::zero_at(a.backend(), a.absolute_precision() + b.valuation());
  if (b.is_zero()) return PadicNumber::zero_at(a.backend(), b.absolute_precision() + a.valuation());
  const auto n = static_cast<std::size_t>(std::min(a.precision(), b.precision()));
  return PadicNumber::from_digits(a.backend(), a.valuation() + b.valuation(),
                                  detail::mul_digits(a.backend(), a.digits(), b.digits(), n));
}

/// Multiplicative inverse: valuation -v, unit inverted modulo u^N.
inline PadicNumber invert(const PadicNumber& a) {
  if (a.is_zero()) fail(ErrorKind::DivisionByZeroAtPrecision, "inverse of " + a.to_string());
  const auto n = static_cast<std::size_t>(a.precision());
  std::vector<Digit> unit(n, 0);
  unit[0] = 1;
  return PadicNumber::from_digits(a.backend(), -a.valuation(),
                                  detail::div_digits(a.backend(), std::move(unit), a.digits(), n));
}

inline PadicNumber div(const PadicNumber& a, const PadicNumber& b) {
  require_same_backend(a, b);
  if (b.is_zero()) fail(ErrorKind::DivisionByZeroAtPrecision, "division by " + b.to_string());
  if (a.is_exact_zero()) return a;
  if (a.is_zero()) return PadicNumber::zero_at(a.backend(), a.absolute_precision() - b.valuation());
  const auto n = static_cast<std::size_t>(std::min(a.precision(), b.precision()));
  return PadicNumber::from_digits(a.backend(), a.valuation() - b.valuation(),
                                  detail::div_digits(a.backend(), a.digits(), b.digits(), n));
}

/// Multiplies by u^k (exact shift of the valuation).
inline PadicNumber shift(const PadicNumber& a, std::int64_t k) {
  if (a.is_exact_zero()) return a;
  if (a.is_zero()) return PadicNumber::zero_at(a.backend(), a.absolute_precision() + k);
  return PadicNumber::from_digits(a.backend(), a.valuation() + k, a.digits());
}

inline PadicNumber pow(const PadicNumber& a, std::int64_t k) {
  if (k < 0) return invert(pow(a, -k));
  PadicNumber result = one(a.backend(), std::max<std::int64_t>(a.precision(), 1));
  if (a.is_zero()) {
    if (k == 0) return result;
    if (a.is_exact_zero()) return a;
    return PadicNumber::zero_at(a.backend(), a.absolute_precision() * k);
  }
  PadicNumber base = a;
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return result;
}

inline PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) { return add(a, b); }
inline PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return sub(a, b); }
inline PadicNumber operator-(const PadicNumber& a) { return negate(a); }
inline PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) { return mul(a, b); }
inline PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return div(a, b); }

inline NormExp norm_exp(const PadicNumber& a) { return a.norm(); }

/// |a - b|, with zero at precision reported as ZERO.
inline NormExp distance(const PadicNumber& a, const PadicNumber& b) { return sub(a, b).norm(); }

/// Equality at certified precision: the difference has no certified nonzero digit.
inline bool agrees(const PadicNumber& a, const PadicNumber& b) { return sub(a, b).is_zero(); }

/// Digits of u^e for e in [lo, hi), zero below the valuation. Requires hi <= absolute precision.
inline std::vector<Digit> digit_window(const PadicNumber& a, std::int64_t lo, std::int64_t hi) {
  std::vector<Digit> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(hi - lo, 0)));
  for (std::int64_t e = lo; e < hi; ++e) out.push_back(a.digit_at(e));
  return out;
}

/// Drops every digit of exponent >= e, returning the canonical representative
/// of the residue class a + B(0, p^(-e)). Precision is kept at absolute bound e.
inline PadicNumber residue_representative(const PadicNumber& a, std::int64_t e) {
  if (a.absolute_precision() < e)
    fail(ErrorKind::PrecisionExhausted, "value not certified to exponent " + std::to_string(e));
  return truncate_absolute(a, e);
}

}  // namespace nahomeo
