#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nahomeo/extension.hpp"
#include "nahomeo/sampling.hpp"

namespace nahomeo {

struct ExtensionInstance {
  std::string name;
  PresentedSpace space;
  PresentedFunction f;
};

namespace detail {

inline Ball<PadicNumber> ball_at(const FieldBackend& f, std::int64_t center, std::int64_t radius_exp) {
  return {from_integer(center, f, 32), radius_exp};
}

inline ExtensionInstance random_instance(Sampler& s, std::size_t index) {
  static const FieldBackend kBackends[] = {FieldBackend::qp(2), FieldBackend::qp(3), FieldBackend::qp(5),
                                           FieldBackend::fp_laurent(2), FieldBackend::fp_laurent(3)};
  const FieldBackend f = kBackends[index % 5];
  ExtensionInstance out;
  out.name = "random-" + std::to_string(index) + "-" + f.name();
  out.space.carrier.resolution = 9;
  const std::int64_t e = s.uniform(0, 1);
  out.space.carrier.balls.push_back({PadicNumber::exact_zero(f), e});
  if (s.coin()) out.space.carrier.balls.push_back({uniformizer_power(f, -(e + 2), 32), 0});

  const std::int64_t want = s.uniform(1, 4);
  for (int attempt = 0; attempt < 64 && static_cast<std::int64_t>(out.f.domain.balls.size()) < want; ++attempt) {
    const auto& host = out.space.carrier.balls[static_cast<std::size_t>(s.uniform(0, static_cast<std::int64_t>(out.space.carrier.balls.size()) - 1))];
    Ball<PadicNumber> b{s.in_ball(host, 12), s.uniform(-5, host.radius_exp - 1)};
    bool clash = false;
    for (const auto& m : out.f.domain.balls) clash = clash || ball_relation(b, m) != BallRelation::Disjoint;
    if (!clash) out.f.domain.balls.push_back(std::move(b));
  }
  out.f.domain.resolution = out.space.carrier.resolution;
  out.f.bound_exp = s.uniform(-1, 2);
  for (std::size_t i = 0; i < out.f.domain.balls.size(); ++i) {
    if (s.uniform(0, 4) == 0)
      out.f.values.push_back(PadicNumber::exact_zero(f));
    else
      out.f.values.push_back(s.nonzero(f, -out.f.bound_exp, -out.f.bound_exp + 3, 32));
  }
  return out;
}

}  // namespace detail

/// Twenty finitely presented (X, M, f) instances: four fixed shapes, then
/// seeded random ones over Q_2, Q_3, Q_5, F_2((t)), F_3((t)).
inline std::vector<ExtensionInstance> extension_catalog(std::uint64_t seed = 16) {
  using detail::ball_at;
  const FieldBackend q3 = FieldBackend::qp(3);
  std::vector<ExtensionInstance> out;

  ExtensionInstance two_ball;
  two_ball.name = "two-ball";
  two_ball.space.carrier = {{ball_at(q3, 0, 0)}, 8};
  two_ball.f.domain = {{ball_at(q3, 0, -1), ball_at(q3, 1, -1)}, 8};
  two_ball.f.values = {PadicNumber::exact_zero(q3), from_integer(1, q3, 32)};
  two_ball.f.bound_exp = 0;
  out.push_back(two_ball);

  ExtensionInstance constant = two_ball;
  constant.name = "constant";
  constant.f.values = {from_integer(1, q3, 32), from_integer(1, q3, 32)};
  out.push_back(constant);

  ExtensionInstance nested;
  nested.name = "nested";
  nested.space.carrier = {{ball_at(q3, 0, 0)}, 8};
  nested.f.domain = {{ball_at(q3, 0, -3)}, 8};
  nested.f.values = {from_integer(1, q3, 32)};
  nested.f.bound_exp = 0;
  out.push_back(nested);

  ExtensionInstance whole;
  whole.name = "whole-space";
  whole.space.carrier = {{ball_at(q3, 0, -1), ball_at(q3, 1, -1), ball_at(q3, 2, -1)}, 8};
  whole.f.domain = whole.space.carrier;
  whole.f.values = {from_integer(2, q3, 32), from_integer(-1, q3, 32), from_integer(3, q3, 32)};
  whole.f.bound_exp = 0;
  out.push_back(whole);

  Sampler s(seed);
  for (std::size_t i = 0; out.size() < 20; ++i) out.push_back(detail::random_instance(s, i));
  return out;
}

}  // namespace nahomeo
