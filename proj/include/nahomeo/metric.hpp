#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>

#include "nahomeo/seq.hpp"

namespace nahomeo {

using Rational = boost::multiprecision::cpp_rational;

/// Which form of the product metric on s to evaluate.
enum class SMetricForm {
  /// sum_j min(p^-j, |x_j - y_j|)
  Standard,
  /// sum_j min(p^-j, |x_j - y_j|^-1), the form as printed; undefined on equal coordinates.
  Literal,
};

/// Truncated sum plus a bound on the omitted terms.
struct SMetricValue {
  Rational value;
  Rational tail_bound;
};

/// p^e as an exact rational.
inline Rational rational_power(std::uint32_t p, std::int64_t e) {
  using boost::multiprecision::cpp_int;
  const cpp_int base = boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(e < 0 ? -e : e));
  return e < 0 ? Rational(cpp_int(1), base) : Rational(base);
}

inline Rational to_rational(const NormExp& n, std::uint32_t p) {
  return n.is_zero() ? Rational(0) : rational_power(p, n.exponent());
}

/// Product metric on s over coordinates 1..depth. Coordinates agreeing at
/// certified precision contribute 0 in the standard form.
inline SMetricValue s_metric(const SeqVector& x, const SeqVector& y, std::size_t depth,
                             SMetricForm form = SMetricForm::Standard) {
  if (x.tag() != SpaceTag::s || y.tag() != SpaceTag::s) fail(ErrorKind::InvalidArgument, "s_metric needs s-tagged vectors");
  if (!(x.backend() == y.backend())) fail(ErrorKind::BackendMismatch, "s_metric across backends");
  const std::uint32_t p = x.backend().p();
  Rational sum = 0;
  for (std::size_t j = 1; j <= depth; ++j) {
    const auto jj = static_cast<std::int64_t>(j);
    const NormExp d = distance(x.at(j), y.at(j));
    const NormExp cap = NormExp::power(-jj);
    if (form == SMetricForm::Standard) {
      sum += to_rational(min(cap, d), p);
    } else {
      if (d.is_zero())
        fail(ErrorKind::MetricUndefined, "|x_" + std::to_string(j) + " - y_" + std::to_string(j) + "|^-1 with equal coordinates");
      sum += to_rational(min(cap, NormExp::power(-d.exponent())), p);
    }
  }
  // sum_{j > depth} p^-j = p^-depth / (p - 1) <= p^-depth
  const auto dd = static_cast<std::int64_t>(depth);
  return {sum, rational_power(p, -dd) / Rational(p - 1)};
}

}  // namespace nahomeo
