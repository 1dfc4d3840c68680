#include "nahomeo/ball.hpp"

#include <gtest/gtest.h>

#include <set>

#include "nahomeo/lemma6.hpp"
#include "nahomeo/sampling.hpp"

namespace {

using namespace nahomeo;

const FieldBackend kQ3 = FieldBackend::qp(3);
const FieldBackend kQ5 = FieldBackend::qp(5);
const FieldBackend kF3 = FieldBackend::fp_laurent(3);
constexpr std::int64_t N = 24;

PadicNumber I(std::int64_t n, const FieldBackend& f = kQ3) { return from_integer(n, f, N); }

Ball<PadicNumber> B(PadicNumber c, std::int64_t e) { return {std::move(c), e}; }

// Oracle: B(c, p^e) is the residue class of c modulo u^(-e); compare digits.
bool same_residue(const PadicNumber& a, const PadicNumber& b, std::int64_t cut) {
  const std::int64_t lo = std::min(a.is_zero() ? cut : a.valuation(), b.is_zero() ? cut : b.valuation());
  for (std::int64_t e = std::min(lo, cut); e < cut; ++e) {
    const Digit da = e < (a.is_zero() ? cut : a.valuation()) ? 0 : a.digit_at(e);
    const Digit db = e < (b.is_zero() ? cut : b.valuation()) ? 0 : b.digit_at(e);
    if (da != db) return false;
  }
  return true;
}

BallRelation oracle_relation(const Ball<PadicNumber>& a, const Ball<PadicNumber>& b) {
  const std::int64_t big = std::max(a.radius_exp, b.radius_exp);
  if (!same_residue(a.center, b.center, -big)) return BallRelation::Disjoint;
  if (a.radius_exp == b.radius_exp) return BallRelation::Equal;
  return a.radius_exp < b.radius_exp ? BallRelation::AinB : BallRelation::BinA;
}

TEST(BallRelation, Examples) {
  EXPECT_EQ(ball_relation(B(I(0), 0), B(I(1), 0)), BallRelation::Equal);
  EXPECT_EQ(ball_relation(B(I(0), -1), B(I(0), 0)), BallRelation::AinB);
  EXPECT_EQ(ball_relation(B(I(0), 0), B(I(0), -1)), BallRelation::BinA);
  EXPECT_EQ(ball_relation(B(I(0), -1), B(I(1), -1)), BallRelation::Disjoint);
}

TEST(BallRelation, TrichotomyAgainstResidueOracle) {
  Sampler s(3);
  int counts[4] = {0, 0, 0, 0};
  for (const auto& f : {kQ3, kF3}) {
    for (int i = 0; i < 10000; ++i) {
      const auto c1 = s.nonzero(f, -2, 2, 8);
      // nearby second center so that every relation occurs
      const auto c2 = s.coin() ? c1 + s.nonzero(f, -2, 4, 8) : s.nonzero(f, -2, 2, 8);
      const Ball<PadicNumber> a{c1, s.uniform(-4, 2)}, b{c2, s.uniform(-4, 2)};
      const auto r = ball_relation(a, b);
      ASSERT_EQ(r, oracle_relation(a, b)) << a.center.to_string() << " " << b.center.to_string();
      ++counts[static_cast<int>(r)];
      // no partial overlap: a shared point forces nesting
      if (r == BallRelation::Disjoint) {
        ASSERT_FALSE(a.contains(b.center) || b.contains(a.center));
      }
    }
  }
  for (int c : counts) EXPECT_GT(c, 100);
}

TEST(SetMinDistance, Examples) {
  Partition<PadicNumber> A{{B(I(0), -1)}, 1}, Bp{{B(I(1), -1)}, 1};
  const auto d = set_min_distance(A, Bp);
  EXPECT_EQ(d.bound, NormExp::power(-1));
  EXPECT_EQ(d.witness, NormExp::power(0));

  try {
    set_min_distance(A, A);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDisjoint);
  }

  Partition<PadicNumber> C{{B(I(0), -2)}, 2}, D{{B(I(3), -2)}, 2};
  const auto e = set_min_distance(C, D);
  EXPECT_EQ(e.bound, NormExp::power(-2));
  EXPECT_EQ(e.witness, NormExp::power(-1));
}

TEST(SetMinDistance, BoundNeverExceedsAnExhibitedPair) {
  Sampler s(4);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    Partition<PadicNumber> A, Bp;
    for (int k = 0; k < 3; ++k) A.balls.push_back({s.nonzero(kQ3, -1, 2, 10), s.uniform(-4, -1)});
    for (int k = 0; k < 3; ++k) Bp.balls.push_back({s.nonzero(kQ3, -1, 2, 10), s.uniform(-4, -1)});
    try {
      const auto d = set_min_distance(A, Bp);
      ASSERT_LE(d.bound, d.witness);
      // sample points inside the balls: their distance is never below the bound
      for (int t = 0; t < 4; ++t) {
        const auto& a = A.balls[static_cast<std::size_t>(s.uniform(0, 2))];
        const auto& b = Bp.balls[static_cast<std::size_t>(s.uniform(0, 2))];
        const auto x = a.center + shift(s.nonzero(kQ3, 0, 3, 10), -a.radius_exp);
        const auto y = b.center + shift(s.nonzero(kQ3, 0, 3, 10), -b.radius_exp);
        ASSERT_TRUE(a.contains(x) && b.contains(y));
        ASSERT_LE(d.bound, distance(x, y));
        ASSERT_LE(d.witness, distance(x, y));
      }
      ++checked;
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::NotDisjoint);
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(Urysohn, PrescribedValuesAndDefault) {
  using P = PadicNumber;
  std::vector<Urysohn<P>::Entry> sets = {
      {Partition<P>{{B(I(0), -2)}, 2}, I(5)},
      {Partition<P>{{B(I(1), -2)}, 2}, I(7)},
      {Partition<P>{{B(I(2), -2)}, 2}, I(11)},
  };
  const Urysohn<P> f(sets);
  EXPECT_EQ(f.separation(), NormExp::power(0));
  EXPECT_EQ(f.r(), NormExp::power(-1));
  EXPECT_EQ(f(I(9)), I(5));
  EXPECT_EQ(f(I(1 + 27)), I(7));
  EXPECT_EQ(f(I(2)), I(11));
  // |x - 0| = 3^-1 <= r: inside the neighbourhood of A_1
  EXPECT_EQ(f(I(3)), I(5));
}

TEST(Urysohn, TwoSetCase) {
  using P = PadicNumber;
  std::vector<Urysohn<P>::Entry> sets = {{Partition<P>{{B(I(0), -1)}, 1}, I(0)},
                                          {Partition<P>{{B(I(1), -1)}, 1}, I(1)}};
  EXPECT_TRUE(urysohn<P>(sets, I(1 + 3)) == I(1));
  EXPECT_TRUE(urysohn<P>(sets, I(0)).is_exact_zero());
  // residue 2: far from A, default value
  EXPECT_TRUE(urysohn<P>(sets, I(2)) == I(1));
}

TEST(Urysohn, SeparationTooSmall) {
  using P = PadicNumber;
  std::vector<Urysohn<P>::Entry> sets = {{Partition<P>{{B(I(0), -1)}, 1}, I(0)},
                                          {Partition<P>{{B(I(1), -1)}, 1}, I(1)}};
  try {
    Urysohn<P>(sets, NormExp::power(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SeparationTooSmall);
  }
}

TEST(Urysohn, LocallyConstantAtScaleR) {
  using P = PadicNumber;
  Sampler s(6);
  std::vector<Urysohn<P>::Entry> sets = {
      {Partition<P>{{B(I(0), -3), B(I(10), -3)}, 3}, I(1)},
      {Partition<P>{{B(I(1), -3), B(I(5), -3)}, 3}, I(2)},
      {Partition<P>{{B(I(18), -3)}, 3}, I(3)},
  };
  const Urysohn<P> f(sets);
  for (int i = 0; i < 3000; ++i) {
    const auto x = s.nonzero(kQ3, 0, 3, 10);
    const auto dx = shift(s.nonzero(kQ3, 0, 3, 10), -f.r().exponent());
    ASSERT_LE(dx.norm(), f.r());
    ASSERT_EQ(f(x), f(x + dx));
  }
}

TEST(Urysohn, FinitePoints) {
  using P = FinitePoint;
  std::vector<Urysohn<P>::Entry> sets = {{Partition<P>{{{{I(0), I(0)}, -1}}, 1}, I(4)},
                                          {Partition<P>{{{{I(0), I(1)}, -1}}, 1}, I(8)}};
  const Urysohn<P> f(sets);
  EXPECT_EQ(f(P{I(3), I(0)}), I(4));
  EXPECT_EQ(f(P{I(0), I(4)}), I(8));
}

TEST(BallTransport, IdentitySwapAndRoundTrip) {
  using P = PadicNumber;
  const Partition<P> part{{B(I(0), -1), B(I(1), -1), B(I(2), -1)}, 1};
  const std::vector<std::size_t> id = {0, 1, 2}, swap = {1, 0, 2};
  EXPECT_EQ(ball_transport(part, part, id, I(7)), I(7));
  EXPECT_TRUE(agrees(ball_transport(part, part, swap, I(0)), I(1)));
  EXPECT_TRUE(agrees(ball_transport(part, part, swap, I(1)), I(0)));

  // different radii: B(0, 3^-1) onto B(5, 3^-3)
  const Partition<P> src{{B(I(0), -1), B(I(1), -1)}, 1};
  const Partition<P> dst{{B(I(5), -3), B(invert(I(3)), 0)}, 3};
  const std::vector<std::size_t> pairing = {0, 1};
  Sampler s(7);
  for (int i = 0; i < 500; ++i) {
    const auto x = s.nonzero(kQ3, 0, 4, 16);
    if (!src.covers(x)) continue;
    const auto y = ball_transport(src, dst, pairing, x);
    ASSERT_TRUE(dst.balls[pairing[*src.locate(x)]].contains(y));
    ASSERT_TRUE(agrees(ball_transport(dst, src, inverse_pairing(pairing), y), x));
  }
}

TEST(BallTransport, OutsideCarrier) {
  using P = PadicNumber;
  const Partition<P> part{{B(I(0), -1)}, 1};
  try {
    ball_transport(part, part, {0}, I(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideCarrier);
  }
}

TEST(BallTransport, FinitePointSwap) {
  using P = FinitePoint;
  const Partition<P> part{{{{I(0), I(0)}, -1}, {{I(1), I(0)}, -1}}, 1};
  const auto y = ball_transport(part, part, {1, 0}, P{I(3), I(9)});
  EXPECT_TRUE(agrees(y[0], I(4)));
  EXPECT_TRUE(agrees(y[1], I(9)));
}

class Lemma6Test : public ::testing::TestWithParam<FieldBackend> {};

TEST_P(Lemma6Test, RoundTripAcrossNormLevels) {
  const auto f = GetParam();
  const Lemma6 l(f, 6, N);
  Sampler s(60 + f.p());
  for (int i = 0; i < 1000; ++i) {
    const auto x = s.nonzero(f, -5, 5, N);
    const auto y = l.forward(x);
    ASSERT_LE(y.norm(), NormExp::power(0));
    ASSERT_FALSE(agrees(y, one(f, N))) << x.to_string();
    ASSERT_TRUE(agrees(l.inverse(y), x)) << x.to_string();
  }
}

TEST_P(Lemma6Test, InverseThenForwardOnPuncturedBall) {
  const auto f = GetParam();
  const Lemma6 l(f, 6, N);
  Sampler s(70 + f.p());
  for (int i = 0; i < 1000; ++i) {
    const auto y = s.punctured_ball(f, N, 5);
    ASSERT_TRUE(agrees(l.forward(l.inverse(y)), y));
  }
}

TEST_P(Lemma6Test, IndexBijectionIsInjective) {
  const auto f = GetParam();
  const Lemma6 l(f, 6, N);
  EXPECT_FALSE(lemma6_collision(l, 10000).has_value());
  // the K side, too, and the two resolved partitions are internally disjoint
  std::set<std::string> keys;
  for (std::size_t i = 0; i < 2000; ++i) keys.insert(ball_key(l.k_ball(i)));
  EXPECT_EQ(keys.size(), 2000u);
  EXPECT_FALSE(first_overlap(l.k_partition()).has_value());
  EXPECT_FALSE(first_overlap(l.punctured_partition()).has_value());
}

INSTANTIATE_TEST_SUITE_P(Backends, Lemma6Test, ::testing::Values(kQ3, kQ5, kF3));

TEST(Lemma6, LevelOneCoversNormUpToP) {
  const Lemma6 l(kQ3, 1, N);
  const auto part = l.k_partition();
  EXPECT_EQ(part.balls.size(), 3u);
  Sampler s(9);
  for (int i = 0; i < 500; ++i) {
    const auto x = s.nonzero(kQ3, -1, 4, N);
    EXPECT_TRUE(part.covers(x));
  }
  EXPECT_FALSE(part.covers(invert(I(9))));
}

TEST(Lemma6, FirstPuncturedAnnulusHasPMinusOneBalls) {
  const Lemma6 l(kQ3, 3, N);
  // B(1,1) \ B(1,1/3) for p = 3: indices 0 and 1, radius 3^-1
  const auto a = l.punctured_ball(0), b = l.punctured_ball(1);
  EXPECT_EQ(a.radius_exp, -1);
  EXPECT_EQ(b.radius_exp, -1);
  EXPECT_EQ(ball_relation(a, b), BallRelation::Disjoint);
  EXPECT_EQ(distance(a.center, I(1)), NormExp::power(0));
  EXPECT_EQ(distance(b.center, I(1)), NormExp::power(0));
  EXPECT_EQ(l.punctured_ball(2).radius_exp, -2);
}

TEST(Lemma6, DistinctBallsHaveDisjointImages) {
  const Lemma6 l(kQ3, 4, N);
  Sampler s(10);
  for (int i = 0; i < 300; ++i) {
    const auto unit = s.with_valuation(kQ3, 0, N), big = s.with_valuation(kQ3, -1, N);
    const Ball<PadicNumber> img_unit{l.forward(unit), l.punctured_ball(l.k_index(unit)).radius_exp};
    const Ball<PadicNumber> img_big{l.forward(big), l.punctured_ball(l.k_index(big)).radius_exp};
    ASSERT_EQ(ball_relation(img_unit, img_big), BallRelation::Disjoint);
  }
}

TEST(Lemma6, UnresolvedCases) {
  const Lemma6 l(kQ3, 2, N);
  auto expect_kind = [](ErrorKind k, auto&& fn) {
    try {
      fn();
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), k) << e.what();
    }
  };
  expect_kind(ErrorKind::UnresolvedAtLevel, [&] { l.inverse(I(1)); });
  expect_kind(ErrorKind::UnresolvedAtLevel, [&] { l.forward(invert(I(27))); });
  expect_kind(ErrorKind::DomainError, [&] { l.inverse(invert(I(3))); });
  EXPECT_NO_THROW(lemma6_phi(I(5), Direction::Forward, 2));
}

}  // namespace
