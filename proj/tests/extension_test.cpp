#include "nahomeo/extension.hpp"

#include <gtest/gtest.h>

#include "nahomeo/catalog.hpp"
#include "nahomeo/sampling.hpp"

namespace {

using namespace nahomeo;

const FieldBackend kQ3 = FieldBackend::qp(3);

PadicNumber I(std::int64_t n) { return from_integer(n, kQ3, 32); }
Ball<PadicNumber> B(std::int64_t c, std::int64_t e) { return {I(c), e}; }

ExtensionInstance find(const std::string& name) {
  for (auto& inst : extension_catalog())
    if (inst.name == name) return inst;
  throw std::runtime_error("no catalog instance " + name);
}

template <class Fn>
void expect_error(ErrorKind kind, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

/// Oracle distance from x to a ball union, straight from the definition on centers.
NormExp distance_to(const Partition<PadicNumber>& M, const PadicNumber& x) {
  NormExp d = NormExp::power(1000);
  for (const auto& b : M.balls) {
    if (b.contains(x)) return NormExp::zero();
    d = min(d, distance(x, b.center));
  }
  return d;
}

TEST(ClassCenter, KeepsLowDigitsAtFullPrecision) {
  const auto x = I(1 + 2 * 3 + 2 * 9 + 27);
  const auto c = class_center(x, 2);
  EXPECT_TRUE(agrees(c, I(7)));
  EXPECT_EQ(c.absolute_precision(), x.absolute_precision());
  EXPECT_TRUE(class_center(I(9), 2).is_zero());
  EXPECT_TRUE(class_center(PadicNumber::exact_zero(kQ3), 5).is_exact_zero());
}

TEST(ExtendStep, WholeSpaceIsReturnedUnchanged) {
  const auto inst = find("whole-space");
  const Extension e(inst.space, inst.f);
  const auto g1 = e.stage(1);
  ASSERT_EQ(g1.values.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(g1.domain.balls[i].radius_exp, inst.f.domain.balls[i].radius_exp);
    EXPECT_EQ(g1.values[i], inst.f.values[i]);
  }
}

TEST(ExtendStep, TwoBallFirstStage) {
  const auto inst = find("two-ball");
  const auto r = extend_step(inst.f, inst.space, 1);
  // c p^-2 is below the ball radii, so P_2 = M
  ASSERT_EQ(r.next.balls.size(), 2u);
  EXPECT_EQ(r.next.balls[0].radius_exp, -1);
  Sampler s(1);
  for (int i = 0; i < 300; ++i) {
    const auto x = s.in_ball(r.next.balls[static_cast<std::size_t>(i % 2)], 24);
    const auto target = i % 2 == 0 ? PadicNumber::exact_zero(kQ3) : I(1);
    EXPECT_LE(distance(r.u(x), target), NormExp::power(-1));
  }
}

TEST(ExtendStep, LargerBoundWidensTheNeighbourhood) {
  auto inst = find("two-ball");
  inst.f.bound_exp = 2;
  const Extension e(inst.space, inst.f);
  const auto r = e.step(1);
  // c p^-2 = 1: P_2 is all of B(0,1), and u_1 is within c/p of f on M
  ASSERT_EQ(r.next.balls.size(), 1u);
  EXPECT_EQ(r.next.balls[0].radius_exp, 0);
  for (const auto& v : r.u.values) EXPECT_LE(v.norm(), NormExp::power(2));
  EXPECT_LE(distance(r.u(I(1)), I(1)), NormExp::power(1));
  EXPECT_LE(distance(r.u(I(0)), I(0)), NormExp::power(1));
}

TEST(Extend, ConstantFunctionGivesConstantInReach) {
  const auto inst = find("constant");
  const auto g = extend(inst.f, inst.space, 4);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const bool in_reach = distance_to(inst.f.domain, g.domain.balls[i].center) <= NormExp::power(-2);
    if (in_reach)
      EXPECT_EQ(g.values[i], I(1));
    else
      EXPECT_TRUE(g.values[i].is_exact_zero());
  }
}

TEST(Extend, TwoBallRestrictionAndLocalConstancy) {
  const auto inst = find("two-ball");
  const auto g = extend(inst.f, inst.space, 4);
  for (const auto& b : g.domain.balls) EXPECT_GE(b.radius_exp, -4);
  Sampler s(2);
  for (int i = 0; i < 500; ++i) {
    const auto& mb = inst.f.domain.balls[static_cast<std::size_t>(i % 2)];
    const auto x = s.in_ball(mb, 24);
    EXPECT_EQ(g(x), inst.f(x));
    // every point of the p^-4 ball around x gets the same value
    const auto y = x + shift(s.nonzero(kQ3, 0, 3, 24), 4);
    EXPECT_EQ(g(x), g(y));
  }
}

TEST(Extend, NestedBallMatchesUrysohnAssignment) {
  const auto inst = find("nested");
  const std::int64_t n_max = 5;
  const Extension e(inst.space, inst.f);
  // A_1 = B(0, 3^-2) gets 1, the rest of B(0,1) gets 0; default r = separation / p = 3^-2
  using P = PadicNumber;
  std::vector<Urysohn<P>::Entry> sets = {
      {Partition<P>{{B(0, -2)}, 8}, I(1)},
      {Partition<P>{{B(1, -1), B(2, -1), B(3, -2), B(6, -2)}, 8}, PadicNumber::exact_zero(kQ3)},
  };
  const Urysohn<P> oracle(sets);
  Sampler s(3);
  for (int i = 0; i < 2000; ++i) {
    const auto x = s.in_ball(inst.space.carrier.balls[0], 24);
    EXPECT_LE(distance(e.eval(x, n_max), oracle(x)), NormExp::power(-n_max)) << x.to_string();
  }
}

TEST(Extend, Errors) {
  auto inst = find("two-ball");
  expect_error(ErrorKind::ResolutionTooCoarse, [&] { extend(inst.f, inst.space, 9); });
  expect_error(ErrorKind::InvalidArgument, [&] { extend(inst.f, inst.space, 1); });
  expect_error(ErrorKind::OutsideCarrier, [&] { Extension(inst.space, inst.f).eval(invert(I(3)), 2); });

  auto fine = inst;
  fine.f.domain.balls[0].radius_exp = -9;
  expect_error(ErrorKind::ResolutionTooCoarse, [&] { Extension(fine.space, fine.f); });

  auto overlap = inst;
  overlap.f.domain.balls[1] = B(3, -2);
  expect_error(ErrorKind::NotDisjoint, [&] { Extension(overlap.space, overlap.f); });

  auto big = inst;
  big.f.values[1] = invert(I(3));
  expect_error(ErrorKind::InvalidArgument, [&] { Extension(big.space, big.f); });
}

class CatalogTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(CatalogTest, RestrictionCauchyAndBound) {
  const auto inst = extension_catalog()[GetParam()];
  const Extension e(inst.space, inst.f);
  const std::int64_t n_max = 6;
  const auto [steps, g] = e.run(n_max);
  ASSERT_EQ(steps.size(), static_cast<std::size_t>(n_max - 1));

  // exact stage gaps, and an independent sampled check against them
  for (std::int64_t n = 1; n < n_max; ++n)
    ASSERT_LE(e.stage_gap(n), NormExp::power(inst.f.bound_exp - n)) << inst.name << " n=" << n;

  Sampler s(100 + GetParam());
  for (int i = 0; i < 400; ++i) {
    const auto& host = inst.space.carrier.balls[static_cast<std::size_t>(i) % inst.space.carrier.balls.size()];
    const auto x = i % 2 == 0 ? s.in_ball(host, 24)
                              : s.in_ball(inst.f.domain.balls[static_cast<std::size_t>(i / 2) % inst.f.domain.balls.size()], 24);
    ASSERT_LE(g(x).norm(), inst.f.bound()) << inst.name;
    ASSERT_EQ(g(x), e.eval(x, n_max));
    if (auto fx = inst.f.at(x)) {
      ASSERT_EQ(g(x), *fx) << inst.name;
    }
    for (std::int64_t n = 1; n < n_max; ++n) {
      ASSERT_LE(distance(e.eval(x, n), e.eval(x, n + 1)), NormExp::power(inst.f.bound_exp - n));
      // u_n stays within c p^-n of f on M, and M lies in P_{n+1}
      if (auto fx = inst.f.at(x)) {
        ASSERT_TRUE(steps[static_cast<std::size_t>(n - 1)].next.covers(x));
        ASSERT_LE(distance(steps[static_cast<std::size_t>(n - 1)].u(x), *fx), NormExp::power(inst.f.bound_exp - n));
      }
    }
  }

  // the table is a partition of X into balls the carrier resolves
  EXPECT_FALSE(first_overlap(g.domain).has_value());
  for (const auto& b : g.domain.balls) EXPECT_GE(b.radius_exp, -inst.space.resolution());
}

TEST_P(CatalogTest, NeighbourhoodsAreDistanceSublevelSets) {
  const auto inst = extension_catalog()[GetParam()];
  const Extension e(inst.space, inst.f);
  Sampler s(200 + GetParam());
  for (int i = 0; i < 200; ++i) {
    const auto x = s.in_ball(inst.space.carrier.balls[0], 24);
    const NormExp d = distance_to(inst.f.domain, x);
    for (std::int64_t n = 1; n < 6; ++n) {
      const bool in_p = e.neighbourhood(n).covers(x);
      ASSERT_EQ(in_p, d <= NormExp::power(inst.f.bound_exp - n - 1)) << inst.name << " n=" << n;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Catalog, CatalogTest, ::testing::Range<std::size_t>(0, 20));

TEST(Catalog, HasTwentyValidInstances) {
  const auto cat = extension_catalog();
  ASSERT_EQ(cat.size(), 20u);
  for (const auto& inst : cat) {
    EXPECT_NO_THROW(Extension(inst.space, inst.f)) << inst.name;
    EXPECT_FALSE(inst.f.domain.balls.empty());
  }
}

}  // namespace
