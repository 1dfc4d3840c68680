#include "nahomeo/chain.hpp"

#include <gtest/gtest.h>

namespace {

using namespace nahomeo;

template <class Fn>
void expect_error(ErrorKind kind, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

/// x_m = p^(m-1) - p^m.
SeqVector telescoping(const FieldBackend& f, std::int64_t n = 32) {
  return SeqVector(f, {}, GeomDiffTail{one(f, n), uniformizer_power(f, 1, n)});
}

class ChainBackend : public ::testing::TestWithParam<FieldBackend> {};

TEST_P(ChainBackend, TelescopingFamilyMapsToConstant) {
  const FieldBackend f = GetParam();
  const auto y = q_forward(telescoping(f), 12);
  const PadicNumber target = one(f, 32) - uniformizer_power(f, 1, 32);
  for (std::size_t m = 1; m <= 20; ++m) EXPECT_TRUE(agrees(y.at(m), target)) << m;
  EXPECT_EQ(y.tag(), SpaceTag::s);
  ASSERT_TRUE(std::holds_alternative<ConstantTail>(y.tail()));
}

TEST_P(ChainBackend, RoundTripOnSampledPoints) {
  const FieldBackend f = GetParam();
  Sampler s(41);
  for (int i = 0; i < 300; ++i) {
    const auto y = sample_s_star(s, f, 12, 32);
    const auto x = q_inverse(y, 12);
    ASSERT_TRUE(membership(x, NamedSet::A1Star, 12).yes());
    const auto y2 = q_forward(x, 12);
    ASSERT_TRUE(coordinates_agree(y, y2, 16));
    const auto x2 = q_inverse(y2, 12);
    ASSERT_TRUE(coordinates_agree(x, x2, 16));
    for (const auto& row : telescoping_rows(x, y, 12)) ASSERT_TRUE(row.holds) << "m=" << row.m;
  }
}

TEST_P(ChainBackend, PartialSumsOfTelescopingFamily) {
  const FieldBackend f = GetParam();
  const auto y = a2_to_a3(telescoping(f), 12);
  for (std::size_t k = 1; k <= 16; ++k) {
    const auto pk = uniformizer_power(f, static_cast<std::int64_t>(k), 40);
    EXPECT_TRUE(agrees(y.at(k), one(f, 40) - pk)) << k;
  }
  EXPECT_EQ(sup_norm(y), NormExp::power(0));
  EXPECT_TRUE(coordinates_agree(a3_to_a2(y, 12), telescoping(f), 16));
}

INSTANTIATE_TEST_SUITE_P(Backends, ChainBackend,
                         ::testing::Values(FieldBackend::qp(3), FieldBackend::qp(5), FieldBackend::fp_laurent(3)));

TEST(QForward, HandComputedPrefix) {
  const auto f = FieldBackend::qp(3);
  const auto I = [&](std::int64_t v) { return from_integer(v, f, 32); };
  // x = (-2, -6, -18, ...) has 1 - S_1 = 3, so y_2 = -6 / 3 = -2
  const SeqVector x(f, {I(-2)}, GeomDiffTail{I(3), I(3)});
  const auto y = q_forward(x, 4);
  EXPECT_TRUE(agrees(y.at(1), I(-2)));
  EXPECT_TRUE(agrees(y.at(2), I(-2)));
  EXPECT_TRUE(agrees(y.at(3), I(-2)));
}

TEST(QForward, RejectsPointsOutsideTheDomain) {
  const auto f = FieldBackend::qp(3);
  // finite support
  expect_error(ErrorKind::DomainError, [&] { q_forward(unit_vector(f, 1, 32), 8); });
  // |1 - S_m| increases
  const SeqVector bad(f, {from_integer(-8, f, 32), from_integer(9, f, 32)}, GeomDiffTail{one(f, 32), from_integer(3, f, 32)});
  expect_error(ErrorKind::DomainError, [&] { q_forward(bad, 8); });
}

TEST(QInverse, TailRules) {
  const auto f = FieldBackend::qp(5);
  const SeqVector periodic(f, {}, PeriodicTail{{from_integer(2, f, 32)}}, SpaceTag::s);
  try {
    q_inverse(periodic, 8);
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::UnsupportedTail || e.kind() == ErrorKind::DomainError) << e.what();
  }
  Sampler s(7);
  const auto y = sample_s_star(s, f, 3, 32);
  const auto x = q_inverse(y, 3);
  // beyond the prefix the tail continues the product
  const auto x_deep = q_inverse(y.materialized(10), 10);
  EXPECT_TRUE(coordinates_agree(x, x_deep, 14));
}

TEST(Differences, InvertPartialSumsOnRandomVectors) {
  Sampler s(9);
  for (const auto& f : {FieldBackend::qp(3), FieldBackend::qp(5), FieldBackend::fp_laurent(3)}) {
    for (int i = 0; i < 300; ++i) {
      const auto v = s.c0_vector(f, 10, -3, 4, 24);
      EXPECT_TRUE(coordinates_agree(differences(partial_sums(v)), v, 14));
      EXPECT_TRUE(coordinates_agree(partial_sums(differences(partial_sums(v))), partial_sums(v), 14));
    }
  }
}

TEST(A2ToA3, FlagsPartialSumsThatVanish) {
  const auto f = FieldBackend::qp(3);
  const auto I = [&](std::int64_t v) { return from_integer(v, f, 32); };
  // S_2 = 0: a point of A2 whose image leaves A3
  const SeqVector x(f, {I(-2), I(2)}, GeomDiffTail{one(f, 32), I(3)});
  ASSERT_TRUE(membership(x, NamedSet::A2, 8).yes());
  expect_error(ErrorKind::DomainError, [&] { a2_to_a3(x, 8); });
}

TEST(A3ToA2, ChecksDomain) {
  const auto f = FieldBackend::qp(3);
  expect_error(ErrorKind::DomainError, [&] { a3_to_a2(telescoping(f), 8); });
  const SeqVector zero_coord(f, {from_integer(-2, f, 32), PadicNumber::exact_zero(f)}, ConstantTail{one(f, 32)},
                             SpaceTag::c);
  expect_error(ErrorKind::DomainError, [&] { a3_to_a2(zero_coord, 8); });
}

TEST(Segments, RegistryAndDispatch) {
  const auto f = FieldBackend::qp(3);
  EXPECT_EQ(chain_segment("q_forward").domain, "A1*");
  EXPECT_FALSE(chain_segment("deletion_c0").callable);
  expect_error(ErrorKind::InvalidArgument, [&] { chain_eval("deletion_s", telescoping(f), 4); });
  expect_error(ErrorKind::InvalidArgument, [&] { chain_segment("nope"); });
  EXPECT_TRUE(coordinates_agree(chain_eval("q_forward", telescoping(f), 8), q_forward(telescoping(f), 8), 10));
}

TEST(ContinuityProbe, PartialSumsAreOneLipschitz) {
  const auto f = FieldBackend::qp(3);
  const auto t = continuity_probe("a2_to_a3", telescoping(f), {1, 2, 4, 8}, 30, 12, 5);
  ASSERT_EQ(t.rows.size(), 4u);
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.samples + row.escapes, 30u);
    EXPECT_LE(row.deviation, NormExp::power(-row.delta));
  }
}

TEST(ContinuityProbe, QInverseDeviationShrinks) {
  const auto f = FieldBackend::qp(5);
  Sampler s(3);
  const auto y = sample_s_star(s, f, 12, 32);
  const auto t = continuity_probe("q_inverse", y, {1, 3, 6}, 20, 12, 6);
  for (const auto& row : t.rows) {
    EXPECT_GT(row.samples, 0u);
    EXPECT_LE(row.deviation, NormExp::power(-row.delta));
  }
  EXPECT_EQ(window_deviation(y, y, 20), NormExp::zero());
}

TEST(ContinuityProbe, QForwardCountsEscapes) {
  const auto f = FieldBackend::qp(3);
  const auto t = continuity_probe("q_forward", telescoping(f), {2}, 20, 12, 1);
  EXPECT_EQ(t.rows[0].samples + t.rows[0].escapes, 20u);
  EXPECT_GT(t.rows[0].escapes, 0u);
}

}  // namespace
