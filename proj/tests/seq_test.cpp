#include "nahomeo/seq.hpp"

#include <gtest/gtest.h>

#include "nahomeo/membership.hpp"
#include "nahomeo/metric.hpp"
#include "nahomeo/sampling.hpp"

namespace {

using namespace nahomeo;

const FieldBackend kQ2 = FieldBackend::qp(2);
const FieldBackend kQ3 = FieldBackend::qp(3);
const FieldBackend kF3 = FieldBackend::fp_laurent(3);
constexpr std::int64_t N = 24;

PadicNumber I(std::int64_t n, const FieldBackend& f = kQ3) { return from_integer(n, f, N); }
PadicNumber U(std::int64_t k, const FieldBackend& f = kQ3) { return uniformizer_power(f, k, N); }

SeqVector telescoping(const FieldBackend& f) {
  return SeqVector(f, {}, GeomDiffTail{one(f, N), U(1, f)}, SpaceTag::c0);
}

TEST(SupNorm, Examples) {
  EXPECT_EQ(sup_norm(zero_vector(kQ3)), NormExp::zero());
  EXPECT_EQ(sup_norm(unit_vector(kQ3, 1, N)), NormExp::power(0));
  EXPECT_EQ(sup_norm(SeqVector(kQ3, {I(3), I(9)})), NormExp::power(-1));
}

TEST(SupNorm, TailBoundsAreExact) {
  // 3^-1 at coordinate 1 of a geom_diff tail with scale 3
  EXPECT_EQ(sup_norm(SeqVector(kQ3, {I(9)}, GeomDiffTail{I(3), U(2)})), NormExp::power(-1));
  // constant-minus-geometric with |L| < |s r|: the first terms dominate
  SeqVector y(kQ3, {}, ConstMinusGeomTail{U(3), I(1), U(1)}, SpaceTag::c);
  EXPECT_EQ(sup_norm(y), NormExp::power(-1));
  // |ratio| = 1 keeps every term at |scale|
  EXPECT_EQ(tail_sup_norm(GeometricTail{I(3), I(2)}), NormExp::power(-1));
}

TEST(SupNorm, ConstMinusGeomWithZeroLimit) {
  // terms -s r^k; the sup is |s r| and no term ever cancels to zero
  const SeqVector v(kQ3, {}, ConstMinusGeomTail{PadicNumber::exact_zero(kQ3), I(2), U(1)});
  EXPECT_EQ(sup_norm(v), NormExp::power(-1));
  const SeqVector w(kF3, {U(3, kF3)}, ConstMinusGeomTail{PadicNumber::zero_at(kF3, 30), U(-1, kF3), U(2, kF3)});
  EXPECT_EQ(sup_norm(w), NormExp::power(-1));
}

TEST(SupNorm, UnboundedGeometricTail) {
  SeqVector g(kQ3, {}, GeometricTail{I(1), invert(I(3))}, SpaceTag::none);
  try {
    tail_sup_norm(g.tail());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnboundedTail);
  }
}

TEST(Tags, C0RejectsNonVanishingTail) {
  EXPECT_THROW(SeqVector(kQ3, {}, ConstantTail{I(1)}, SpaceTag::c0), Error);
  EXPECT_NO_THROW(SeqVector(kQ3, {}, ConstantTail{I(1)}, SpaceTag::c));
  EXPECT_THROW(SeqVector(kQ3, {}, PeriodicTail{{I(1), I(2)}}, SpaceTag::c), Error);
  EXPECT_THROW(SeqVector(kQ3, {}, GeomDiffTail{I(1), I(1)}), Error);
}

TEST(Project, Examples) {
  const auto e2 = unit_vector(kQ3, 2, N);
  EXPECT_TRUE(agrees(project(e2, 2), I(1)));
  EXPECT_TRUE(project(e2, 5).is_exact_zero());
  EXPECT_TRUE(agrees(project(telescoping(kQ3), 3), I(9 - 27)));
}

TEST(Project, MaterializeKeepsCoordinates) {
  Sampler s(1);
  for (int i = 0; i < 200; ++i) {
    const auto x = s.c0_vector(kQ3, 4, -2, 3, 16);
    const auto m = x.materialized(9);
    EXPECT_EQ(m.prefix_length(), 9u);
    EXPECT_TRUE(coordinates_agree(x, m, 20));
  }
}

TEST(PartialSums, Examples) {
  const auto z = partial_sums(zero_vector(kQ3));
  for (std::size_t k = 1; k < 6; ++k) EXPECT_TRUE(z.at(k).is_zero());

  const SeqVector x(kQ2, {I(1, kQ2), I(2, kQ2), I(4, kQ2)});
  const auto y = partial_sums(x);
  EXPECT_EQ(y.tag(), SpaceTag::c);
  const std::int64_t want[] = {1, 3, 7, 7, 7, 7};
  for (std::size_t k = 1; k <= 6; ++k) EXPECT_TRUE(agrees(y.at(k), I(want[k - 1], kQ2))) << k;

  const auto t = partial_sums(telescoping(kQ3));
  for (std::int64_t k = 1; k <= 10; ++k) EXPECT_TRUE(agrees(t.at(static_cast<std::size_t>(k)), I(1) - U(k)));
  ASSERT_TRUE(std::holds_alternative<ConstMinusGeomTail>(t.tail()));
  EXPECT_TRUE(agrees(std::get<ConstMinusGeomTail>(t.tail()).limit, I(1)));
}

TEST(Differences, Examples) {
  const SeqVector ones(kQ3, {}, ConstantTail{I(1)}, SpaceTag::c);
  EXPECT_TRUE(coordinates_agree(differences(ones), unit_vector(kQ3, 1, N), 10));

  const SeqVector y(kQ2, {I(1, kQ2), I(3, kQ2), I(7, kQ2)}, ConstantTail{I(7, kQ2)}, SpaceTag::c);
  const auto x = differences(y);
  const std::int64_t want[] = {1, 2, 4, 0, 0, 0};
  for (std::size_t k = 1; k <= 6; ++k) EXPECT_TRUE(agrees(x.at(k), I(want[k - 1], kQ2))) << k;
}

// Oracle: direct summation and subtraction of materialized coordinates.
class SumsOracle : public ::testing::TestWithParam<FieldBackend> {};

TEST_P(SumsOracle, ClosedFormTailsMatchDirectSums) {
  const auto f = GetParam();
  Sampler s(31 + f.p());
  for (int i = 0; i < 300; ++i) {
    const auto x = s.c0_vector(f, static_cast<std::size_t>(s.uniform(0, 5)), -2, 3, 20);
    const auto y = partial_sums(x);
    PadicNumber acc = PadicNumber::exact_zero(f);
    for (std::size_t k = 1; k <= 14; ++k) {
      acc = acc + x.at(k);
      ASSERT_TRUE(agrees(y.at(k), acc)) << "k=" << k;
    }
    const auto back = differences(y);
    for (std::size_t k = 1; k <= 14; ++k) ASSERT_TRUE(agrees(back.at(k), x.at(k))) << "k=" << k;
  }
}

TEST_P(SumsOracle, DifferencesThenSumsIsIdentity) {
  const auto f = GetParam();
  Sampler s(41 + f.p());
  for (int i = 0; i < 300; ++i) {
    const auto y = partial_sums(s.c0_vector(f, 3, -1, 2, 20));
    const auto again = partial_sums(differences(y));
    ASSERT_TRUE(coordinates_agree(again, y, 14));
  }
}

INSTANTIATE_TEST_SUITE_P(Backends, SumsOracle, ::testing::Values(kQ3, kQ2, kF3));

TEST(SupNorm, OrthogonalityInequality) {
  Sampler s(5);
  for (int i = 0; i < 1000; ++i) {
    const auto x = SeqVector(kQ3, s.c0_vector(kQ3, 5, -2, 3, 16).window(5));
    const auto y = SeqVector(kQ3, s.c0_vector(kQ3, 6, -2, 3, 16).window(6));
    const auto a = s.nonzero(kQ3, -2, 2, 16), b = s.nonzero(kQ3, -2, 2, 16);
    const auto ax = scale(x, a), by = scale(y, b);
    ASSERT_LE(sup_norm(ax + by), max(sup_norm(ax), sup_norm(by)));
  }
}

TEST(Membership, ZeroIsNotInA1) {
  const auto v = membership(zero_vector(kQ3), NamedSet::A1, 4);
  EXPECT_TRUE(v.no());
  EXPECT_NE(v.reason.find("sup"), std::string::npos);
}

TEST(Membership, E1IsNotInA1Star) {
  const auto v = membership(unit_vector(kQ3, 1, N), NamedSet::A1Star, 4);
  EXPECT_TRUE(v.no());
  EXPECT_NE(v.reason.find("finite support"), std::string::npos);
  EXPECT_TRUE(membership(unit_vector(kQ3, 1, N), NamedSet::A1, 4).yes());
}

TEST(Membership, TelescopingIsInA1StarAndA2) {
  for (const auto& f : {kQ3, kQ2, kF3}) {
    const auto x = telescoping(f);
    EXPECT_TRUE(membership(x, NamedSet::A1Star, 10).yes()) << membership(x, NamedSet::A1Star, 10).reason;
    EXPECT_TRUE(membership(x, NamedSet::A2Star, 10).yes());
    EXPECT_TRUE(membership(x, NamedSet::A0, 10).yes());
  }
}

TEST(Membership, MonotonicityViolationIsLocated) {
  // x = (1 - 9, 9 - 3, tail 3*(3^(k-1) - 3^k)): |1 - S_1| = 3^-2 then |1 - S_2| = 3^-1
  const SeqVector x(kQ3, {I(1 - 9), I(9 - 3)}, GeomDiffTail{I(3), U(1)});
  const auto v = membership(x, NamedSet::A1, 6);
  ASSERT_TRUE(v.no());
  EXPECT_EQ(v.index, 2u);
  EXPECT_TRUE(membership(x, NamedSet::A2, 6).yes());
}

TEST(Membership, PartialSumAgreeingWithOneIsNotCertified) {
  // S_1 = 1 to every certified digit; later partial sums 1 - 3 + 3(1 - 3^k) stay away from 1
  const SeqVector x(kQ3, {I(1), I(-3)}, GeomDiffTail{I(3), U(1)});
  const auto v = membership(x, NamedSet::A2, 6);
  EXPECT_EQ(v.verdict, Verdict::Inconclusive);
  EXPECT_NE(v.reason.find("S_1"), std::string::npos);
  EXPECT_TRUE(membership(x, NamedSet::A0, 6).yes());
}

TEST(Membership, WrongSumIsRejected) {
  const SeqVector x(kQ3, {}, GeomDiffTail{I(2), U(1)});
  EXPECT_TRUE(membership(x, NamedSet::A1, 4).no());
  EXPECT_TRUE(membership(x, NamedSet::A0, 4).yes());
}

TEST(Membership, A1StarImpliesA2OnPerturbedTelescoping) {
  Sampler s(8);
  int yes = 0;
  for (int i = 0; i < 400; ++i) {
    // geom_diff(1, r) with random |r| < 1, plus a prefix perturbation summing to zero
    const auto r = s.nonzero(kQ3, 1, 2, N);
    const auto e = s.nonzero(kQ3, 1, 4, N);
    const auto base = SeqVector(kQ3, {}, GeomDiffTail{one(kQ3, N), r}).materialized(3);
    auto pre = base.prefix();
    pre[0] = pre[0] + e;
    pre[1] = pre[1] - e;
    const SeqVector x(kQ3, pre, base.tail());
    const auto a1 = membership(x, NamedSet::A1Star, 8);
    ASSERT_NE(a1.verdict, Verdict::Inconclusive) << a1.reason;
    if (a1.yes()) {
      ++yes;
      ASSERT_TRUE(membership(x, NamedSet::A2, 8).yes()) << membership(x, NamedSet::A2, 8).reason;
    }
  }
  EXPECT_GT(yes, 50);
}

TEST(Membership, SAndSStar) {
  const SeqVector y(kQ3, {}, ConstantTail{I(1) - I(3)}, SpaceTag::s);
  EXPECT_TRUE(membership(y, NamedSet::S, 5).yes());
  EXPECT_TRUE(membership(y, NamedSet::SStar, 5).yes());
  // a coordinate equal to 1
  EXPECT_TRUE(membership(SeqVector(kQ3, {I(1)}, ConstantTail{I(-2)}, SpaceTag::s), NamedSet::S, 5).no());
  // finite support: in s but not s*
  const SeqVector fin(kQ3, {I(3), I(2)}, ZeroTail{}, SpaceTag::s);
  EXPECT_TRUE(membership(fin, NamedSet::S, 5).yes());
  EXPECT_TRUE(membership(fin, NamedSet::SStar, 5).no());
  // unit factors 1 - y_j = 2: product has norm 1, does not vanish
  const SeqVector big(kQ3, {}, ConstantTail{I(-1)}, SpaceTag::s);
  EXPECT_TRUE(membership(big, NamedSet::SStar, 5).no());
  // |y| > 1
  EXPECT_TRUE(membership(SeqVector(kQ3, {invert(I(3))}, ZeroTail{}, SpaceTag::s), NamedSet::S, 5).no());
}

TEST(Membership, UnitGeometricTailIsInconclusive) {
  const SeqVector y(kQ3, {}, GeometricTail{I(2), I(2)}, SpaceTag::s);
  EXPECT_EQ(membership(y, NamedSet::S, 3).verdict, Verdict::Inconclusive);
}

TEST(Membership, DepthBelowPrefixIsRejected) {
  EXPECT_THROW(membership(SeqVector(kQ3, {I(1), I(2)}), NamedSet::A1, 1), Error);
}

SeqVector s_point(std::vector<PadicNumber> pre) { return SeqVector(kQ3, std::move(pre), ConstantTail{I(3)}, SpaceTag::s); }

TEST(SMetric, Examples) {
  const auto x = s_point({I(3), I(6), I(0)});
  EXPECT_EQ(s_metric(x, x, 8).value, 0);
  // unit difference at coordinate 1
  EXPECT_EQ(s_metric(x, s_point({I(4), I(6), I(0)}), 8).value, Rational(1, 3));
  // |x_2 - y_2| = 3^-3 at coordinate 2
  EXPECT_EQ(s_metric(x, s_point({I(3), I(6 + 27), I(0)}), 8).value, Rational(1, 27));
  EXPECT_EQ(s_metric(x, x, 8).tail_bound, Rational(1, 6561 * 2));
}

TEST(SMetric, LiteralFormIsUndefinedOnTheDiagonal) {
  const auto x = s_point({I(3)});
  try {
    s_metric(x, x, 4, SMetricForm::Literal);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MetricUndefined);
  }
}

TEST(SMetric, Axioms) {
  Sampler s(9);
  auto draw = [&] {
    std::vector<PadicNumber> pre;
    for (int j = 0; j < 6; ++j) pre.push_back(s.punctured_ball(kQ3, 12, 4));
    return SeqVector(kQ3, pre, ConstantTail{I(3)}, SpaceTag::s);
  };
  for (int i = 0; i < 500; ++i) {
    const auto x = draw(), y = draw(), z = draw();
    const auto dxy = s_metric(x, y, 10).value, dyz = s_metric(y, z, 10).value, dxz = s_metric(x, z, 10).value;
    ASSERT_EQ(dxy, s_metric(y, x, 10).value);
    ASSERT_LE(dxz, dxy + dyz);
    ASSERT_EQ(s_metric(x, x, 10).value, 0);
    ASSERT_EQ(dxy == 0, coordinates_agree(x, y, 10));
  }
}

}  // namespace
