#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "nahomeo/catalog.hpp"
#include "nahomeo/lemma6.hpp"
#include "nahomeo/push.hpp"
#include "nahomeo/serialize.hpp"

namespace nahomeo {

// Property suites. Every case input is generated as JSON from a per-case
// seed and checked from that JSON alone, so a counterexample payload replays
// without the original run and sharding does not change any case.

struct PropertyTally {
  std::size_t pass = 0;
  std::size_t fail = 0;
  friend bool operator==(const PropertyTally&, const PropertyTally&) = default;
};

struct Counterexample {
  std::string suite;
  std::string property;
  std::uint64_t seed = 0;
  std::uint64_t case_index = 0;
  json input;
  std::string message;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::map<std::string, PropertyTally> properties;
  std::vector<Counterexample> counterexamples;
  /// Summed worker time; only set when timing is requested, so reports stay
  /// byte-identical across runs otherwise.
  std::optional<double> wall_seconds;

  bool passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto& kv) { return kv.second.fail == 0; });
  }
};

/// Outcome of one property on one input: nullopt on pass, else the reason.
using Check = std::function<std::optional<std::string>(const json&)>;

struct Suite {
  std::string name;
  std::string summary;
  std::function<json(Sampler&, std::uint64_t)> generate;
  std::vector<std::pair<std::string, Check>> properties;
  std::size_t default_cases = 1000;
};

inline std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(seed ^ mix(index));
}

namespace detail {

constexpr std::int64_t kN = 32;
constexpr std::size_t kDepth = 12;

inline std::optional<std::string> expect(bool ok, const std::string& why) {
  if (ok) return std::nullopt;
  return why;
}

inline FieldBackend rotate_backend(std::uint64_t i) {
  switch (i % 3) {
    case 0: return FieldBackend::qp(3);
    case 1: return FieldBackend::qp(5);
    default: return FieldBackend::fp_laurent(3);
  }
}

inline PadicNumber num(const json& j, const char* key) { return padic_from_json(field(j, key)); }
inline SeqVector seq(const json& j, const char* key) { return seq_from_json(field(j, key)); }

/// Parameters across B(0,1): zero, small, units, near 1 and exactly 1.
inline PadicNumber sample_parameter(Sampler& s, const FieldBackend& f) {
  switch (s.uniform(0, 5)) {
    case 0: return PadicNumber::exact_zero(f);
    case 1: return s.nonzero(f, 1, 6, kN);
    case 2: return s.nonzero(f, 0, 0, kN);
    case 3: return one(f, kN) - s.nonzero(f, 1, 6, kN);
    case 4: return one(f, kN);
    default: return s.nonzero(f, 0, 3, kN);
  }
}

/// Point of c0(1). Deep points sit in U_2..U_L so products run several factors.
inline SeqVector sample_c01(Sampler& s, const FieldBackend& f, bool deep) {
  if (!deep) return s.c0_vector(f, 6, -1, 4, kN).with_coordinate(1, one(f, kN));
  const std::int64_t levels = s.uniform(2, 7);
  const std::int64_t k = levels + 3;
  std::vector<PadicNumber> pre{one(f, kN), s.nonzero(f, k, k + 2, kN)};
  const PadicNumber near = one(f, kN) - uniformizer_power(f, 1, kN);
  for (std::int64_t l = 3; l <= levels + 1; ++l) pre.push_back(near + s.nonzero(f, k, k + 2, kN));
  return SeqVector(f, std::move(pre));
}

/// Point of A2 built from its partial sums: units y_k != 1 on a prefix and
/// the tail 1 - scale ratio^k.
inline SeqVector sample_a2(Sampler& s, const FieldBackend& f, std::size_t len) {
  std::vector<PadicNumber> y;
  while (y.size() < len) {
    const PadicNumber c = s.with_valuation(f, 0, kN);
    if (!(one(f, kN) - c).is_zero()) y.push_back(c);
  }
  const ConstMinusGeomTail tail{one(f, kN), s.nonzero(f, 0, 2, kN), s.nonzero(f, 1, 2, kN)};
  return differences(SeqVector(f, std::move(y), tail, SpaceTag::c));
}

inline bool punctured(const PadicNumber& y) { return y.norm() <= NormExp::power(0) && !agrees(y, one_like(y)); }

/// Ball relation read off digits: A is inside B when it is not larger and
/// its center lies within B's radius.
inline BallRelation relation_oracle(const Ball<PadicNumber>& a, const Ball<PadicNumber>& b) {
  const PadicNumber d = a.center - b.center;
  const auto within = [&](std::int64_t r) { return d.is_zero() || d.valuation() >= -r; };
  if (!within(std::max(a.radius_exp, b.radius_exp))) return BallRelation::Disjoint;
  if (a.radius_exp == b.radius_exp) return BallRelation::Equal;
  return a.radius_exp < b.radius_exp ? BallRelation::AinB : BallRelation::BinA;
}

inline json instance_to_json(const ExtensionInstance& inst) {
  return {{"name", inst.name}, {"space", to_json(inst.space)}, {"function", to_json(inst.f)}};
}

inline ExtensionInstance instance_from_json(const json& j) {
  return {get_as<std::string>(j, "name"), space_from_json(field(j, "space")), function_from_json(field(j, "function"))};
}

inline std::vector<Suite> build_suites() {
  std::vector<Suite> out;

  out.push_back({"ultrametric", "strong triangle inequality, multiplicativity, strict max",
                 [](Sampler& s, std::uint64_t i) {
                   const FieldBackend f = rotate_backend(i);
                   const auto pick = [&](std::int64_t v) {
                     return s.uniform(0, 15) == 0 ? PadicNumber::exact_zero(f) : s.nonzero(f, v, v, 16);
                   };
                   const std::int64_t v = s.uniform(-4, 4);
                   const PadicNumber x = pick(v);
                   const PadicNumber y = pick(s.coin() ? v : s.uniform(-4, 4));
                   return json{{"x", to_json(x)}, {"y", to_json(y)}};
                 },
                 {{"strong_triangle",
                   [](const json& in) {
                     const auto x = num(in, "x"), y = num(in, "y");
                     return expect((x + y).norm() <= max(x.norm(), y.norm()), "|x+y| > max(|x|,|y|)");
                   }},
                  {"multiplicative",
                   [](const json& in) {
                     const auto x = num(in, "x"), y = num(in, "y");
                     return expect((x * y).norm() == x.norm() * y.norm(), "|xy| != |x||y|");
                   }},
                  {"strict_max",
                   [](const json& in) {
                     const auto x = num(in, "x"), y = num(in, "y");
                     if (x.norm() == y.norm()) return std::optional<std::string>{};
                     return expect((x + y).norm() == max(x.norm(), y.norm()), "|x+y| != max for distinct norms");
                   }}},
                 10000});

  out.push_back({"q", "q_forward and q_inverse on constructive s* samples",
                 [](Sampler& s, std::uint64_t i) { return json{{"y", to_json(sample_s_star(s, rotate_backend(i), kDepth, kN))}}; },
                 {{"inverse_in_a1star",
                   [](const json& in) {
                     return expect(membership(q_inverse(seq(in, "y"), kDepth), NamedSet::A1Star, kDepth).yes(),
                                   "q_inverse(y) not certified in A1*");
                   }},
                  {"forward_after_inverse",
                   [](const json& in) {
                     const auto y = seq(in, "y");
                     return expect(coordinates_agree(q_forward(q_inverse(y, kDepth), kDepth), y, kDepth + 4),
                                   "q_forward(q_inverse(y)) != y");
                   }},
                  {"inverse_after_forward",
                   [](const json& in) {
                     const auto x = q_inverse(seq(in, "y"), kDepth);
                     return expect(coordinates_agree(q_inverse(q_forward(x, kDepth), kDepth), x, kDepth + 4),
                                   "q_inverse(q_forward(x)) != x");
                   }},
                  {"telescoping_identity",
                   [](const json& in) {
                     const auto x = q_inverse(seq(in, "y"), kDepth);
                     for (const auto& row : telescoping_rows(x, q_forward(x, kDepth), kDepth))
                       if (!row.holds) return expect(false, "product != 1 - S_m at m = " + std::to_string(row.m));
                     return expect(true, "");
                   }}},
                 1000});

  out.push_back({"telescoping", "q_forward(p^(m-1) - p^m) is the constant 1 - p",
                 [](Sampler&, std::uint64_t i) {
                   const FieldBackend f = FieldBackend::qp(i % 2 == 0 ? 3 : 5);
                   const SeqVector x(f, {}, GeomDiffTail{one(f, kN), uniformizer_power(f, 1, kN)});
                   return json{{"x", to_json(x)}};
                 },
                 {{"constant_one_minus_p",
                   [](const json& in) {
                     const auto x = seq(in, "x");
                     const auto y = q_forward(x, kDepth);
                     const PadicNumber c = one(x.backend(), kN) - uniformizer_power(x.backend(), 1, kN);
                     for (std::size_t m = 1; m <= kDepth; ++m)
                       if (!agrees(y.at(m), c)) return expect(false, "y_" + std::to_string(m) + " != 1 - p");
                     return expect(true, "");
                   }}},
                 2});

  out.push_back({"partial_sums", "partial_sums and differences are mutually inverse",
                 [](Sampler& s, std::uint64_t i) { return json{{"x", to_json(s.c0_vector(rotate_backend(i), 10, -3, 4, 24))}}; },
                 {{"differences_of_sums",
                   [](const json& in) {
                     const auto x = seq(in, "x");
                     return expect(coordinates_agree(differences(partial_sums(x)), x, 16), "differences(partial_sums(x)) != x");
                   }},
                  {"sums_of_differences",
                   [](const json& in) {
                     const auto y = partial_sums(seq(in, "x"));
                     return expect(coordinates_agree(partial_sums(differences(y)), y, 16), "partial_sums(differences(y)) != y");
                   }}},
                 1000});

  out.push_back({"a2_to_a3", "partial-sum images of A2 points lie in A3",
                 [](Sampler& s, std::uint64_t i) {
                   const FieldBackend f = rotate_backend(i);
                   if (i % 7 == 0) return json{{"x", to_json(SeqVector(f, {}, GeomDiffTail{one(f, kN), uniformizer_power(f, 1, kN)}))}};
                   return json{{"x", to_json(sample_a2(s, f, static_cast<std::size_t>(s.uniform(1, 8))))}};
                 },
                 {{"in_a2", [](const json& in) { return expect(membership(seq(in, "x"), NamedSet::A2, kDepth).yes(), "x not in A2"); }},
                  {"sup_one",
                   [](const json& in) {
                     return expect(sup_norm(a2_to_a3(seq(in, "x"), kDepth)) == NormExp::power(0), "sup |y_k| != 1");
                   }},
                  {"nonzero_coordinates",
                   [](const json& in) {
                     return expect(!zero_coordinate(a2_to_a3(seq(in, "x"), kDepth), kDepth).has_value(), "some y_k = 0");
                   }},
                  {"limit_one",
                   [](const json& in) {
                     const auto y = a2_to_a3(seq(in, "x"), kDepth);
                     const auto* c = std::get_if<ConstantTail>(&y.tail());
                     const auto* g = std::get_if<ConstMinusGeomTail>(&y.tail());
                     const bool ok = (c && agrees(c->value, one_like(c->value))) || (g && agrees(g->limit, one_like(g->limit)));
                     return expect(ok, "limit of y not certified as 1");
                   }},
                  {"round_trip",
                   [](const json& in) {
                     const auto x = seq(in, "x");
                     return expect(coordinates_agree(a3_to_a2(a2_to_a3(x, kDepth), kDepth), x, 16), "a3_to_a2(a2_to_a3(x)) != x");
                   }}},
                 1000});

  out.push_back({"lemma6", "K -> B(0,1) minus {1} on norm levels p^-5..p^5",
                 [](Sampler& s, std::uint64_t i) { return json{{"x", to_json(s.nonzero(rotate_backend(i), -5, 5, kN))}}; },
                 {{"image_punctured",
                   [](const json& in) {
                     return expect(punctured(lemma6_phi(num(in, "x"), Direction::Forward, 6)), "image outside B(0,1) minus {1}");
                   }},
                  {"round_trip",
                   [](const json& in) {
                     const auto x = num(in, "x");
                     const auto y = lemma6_phi(x, Direction::Forward, 6);
                     return expect(agrees(lemma6_phi(y, Direction::Inverse, 6), x), "inverse(forward(x)) != x");
                   }}},
                 1000});

  out.push_back({"extension", "extension over the catalog: restriction, stage bound, global bound",
                 [](Sampler& s, std::uint64_t i) {
                   static const auto cat = extension_catalog();
                   return json{{"instance", instance_to_json(cat[i % cat.size()])}, {"n_max", 6},
                               {"point_seed", s.uniform(0, 1 << 30)}};
                 },
                 {{"stage_bound",
                   [](const json& in) {
                     const auto inst = instance_from_json(field(in, "instance"));
                     const Extension e(inst.space, inst.f);
                     const auto n_max = get_as<std::int64_t>(in, "n_max");
                     for (std::int64_t n = 1; n < n_max; ++n)
                       if (!(e.stage_gap(n) <= NormExp::power(inst.f.bound_exp - n)))
                         return expect(false, "sup |g_n - g_(n+1)| > c p^-n at n = " + std::to_string(n));
                     return expect(true, "");
                   }},
                  {"restriction_and_bound",
                   [](const json& in) {
                     const auto inst = instance_from_json(field(in, "instance"));
                     const auto g = extend(inst.f, inst.space, get_as<std::int64_t>(in, "n_max"));
                     Sampler s(get_as<std::uint64_t>(in, "point_seed"));
                     for (int k = 0; k < 200; ++k) {
                       const auto& host = inst.space.carrier.balls[static_cast<std::size_t>(k) % inst.space.carrier.balls.size()];
                       const auto& mb = inst.f.domain.balls[static_cast<std::size_t>(k) % inst.f.domain.balls.size()];
                       const auto x = s.in_ball(k % 2 == 0 ? host : mb, 24);
                       if (!(g(x).norm() <= inst.f.bound())) return expect(false, "|g(x)| > c at " + x.to_string());
                       if (const auto fx = inst.f.at(x); fx && !(g(x) == *fx))
                         return expect(false, "g != f on M at " + x.to_string());
                     }
                     return expect(true, "");
                   }}},
                 20});

  out.push_back({"isotopy", "shipped isotopies: H_0 = id, inverse, support",
                 [](Sampler& s, std::uint64_t i) {
                   static const char* names[] = {"push_c01", "push_origin", "example17", "push_origin_scaled"};
                   const FieldBackend f = i % 2 == 0 ? FieldBackend::qp(3) : FieldBackend::fp_laurent(3);
                   const std::string name = names[(i / 2) % 4];
                   SeqVector x = name == "push_c01" ? sample_c01(s, f, s.coin()) : s.c0_vector(f, 5, s.coin() ? 0 : -2, 4, kN);
                   return json{{"name", name}, {"t", to_json(sample_parameter(s, f))}, {"x", to_json(x)}};
                 },
                 {{"identity_at_zero",
                   [](const json& in) {
                     const auto x = seq(in, "x");
                     const auto H = shipped_isotopies(x.backend()).at(get_as<std::string>(in, "name"));
                     return expect(H.eval(x, PadicNumber::exact_zero(x.backend())) == x, "H_0(x) != x");
                   }},
                  {"inverse",
                   [](const json& in) {
                     const auto x = seq(in, "x");
                     const auto t = num(in, "t");
                     const auto H = shipped_isotopies(x.backend()).at(get_as<std::string>(in, "name"));
                     return expect(coordinates_agree(H.inv_eval(H.eval(x, t), t), x, 16), "inv_eval(eval(x, t), t) != x");
                   }},
                  {"support",
                   [](const json& in) {
                     const auto x = seq(in, "x");
                     const auto t = num(in, "t");
                     const auto H = shipped_isotopies(x.backend()).at(get_as<std::string>(in, "name"));
                     if (H.support.contains(x)) return expect(true, "");
                     return expect(H.eval(x, t) == x, "point outside the support moved");
                   }}},
                 1000});

  out.push_back({"push_time_one", "push_point_c01 at t = 1 never reaches q1",
                 [](Sampler& s, std::uint64_t i) {
                   const FieldBackend f = rotate_backend(i);
                   SeqVector x = sample_c01(s, f, i % 3 == 0);
                   if (i == 0) x = q1(f, kN);
                   else if (i % 5 == 0) x = q1(f, kN).with_coordinate(static_cast<std::size_t>(s.uniform(2, 6)), s.nonzero(f, 3, 12, kN));
                   return json{{"x", to_json(x)}};
                 },
                 {{"avoids_q1",
                   [](const json& in) {
                     const auto x = seq(in, "x");
                     const auto q = q1(x.backend(), kN);
                     return expect(!coordinates_agree(push_point_c01(one(x.backend(), kN), x), q, 16), "H_1(x) = q1");
                   }}},
                 1000});

  out.push_back({"left_product", "finite reduction for |t| < 1 and factor counts near 1",
                 [](Sampler& s, std::uint64_t i) {
                   const FieldBackend f = FieldBackend::qp(3);
                   const std::int64_t k = static_cast<std::int64_t>(i % 7) - 1;
                   // k = -1: |t| < 1; otherwise t in the annulus |1 - t| = p^-k
                   PadicNumber t = k < 0 ? s.nonzero(f, 1, 8, kN) : one(f, kN) - s.with_valuation(f, k, kN);
                   if (k == 0)
                     while (!(distance(one(f, kN), t) == NormExp::power(0)) || !(t.norm() == NormExp::power(0)))
                       t = s.with_valuation(f, 0, kN);
                   return json{{"t", to_json(t)}, {"x", to_json(sample_c01(s, f, true))}, {"annulus", k}};
                 },
                 {{"finite_reduction",
                   [](const json& in) {
                     if (get_as<std::int64_t>(in, "annulus") >= 0) return expect(true, "");
                     const auto x = seq(in, "x");
                     const auto t = num(in, "t");
                     const auto st = push_c01_stream(x.backend(), kN);
                     const auto r = left_product(st, t, x);
                     return expect(r.factors == 1 && r.result == reparam(st.factor(0), st.window(0)).forward(x, t),
                                   "left product differs from the factor-0 evaluation");
                   }},
                  {"factor_count",
                   [](const json& in) {
                     const auto k = get_as<std::int64_t>(in, "annulus");
                     if (k < 0) return expect(true, "");
                     const auto x = seq(in, "x");
                     const auto r = left_product(push_c01_stream(x.backend(), kN), num(in, "t"), x);
                     return expect(r.factors == static_cast<std::size_t>(k + 1),
                                   "evaluated " + std::to_string(r.factors) + " factors, expected " + std::to_string(k + 1));
                   }}},
                 140});

  out.push_back({"balls", "ball trichotomy against digit comparison",
                 [](Sampler& s, std::uint64_t i) {
                   const FieldBackend f = i % 2 == 0 ? FieldBackend::qp(3) : FieldBackend::fp_laurent(3);
                   const PadicNumber c = s.nonzero(f, -2, 3, 12);
                   const PadicNumber d = s.coin() ? c + s.nonzero(f, -2, 5, 12) : c;
                   return json{{"a", to_json(Ball<PadicNumber>{c, s.uniform(-4, 2)})},
                               {"b", to_json(Ball<PadicNumber>{d, s.uniform(-4, 2)})}};
                 },
                 {{"trichotomy",
                   [](const json& in) {
                     const auto a = ball_from_json(field(in, "a")), b = ball_from_json(field(in, "b"));
                     return expect(ball_relation(a, b) == relation_oracle(a, b), "relation differs from digit comparison");
                   }}},
                 10000});

  out.push_back({"example17", "inverse family jumps at the origin along the witness",
                 [](Sampler&, std::uint64_t i) {
                   json j = backend_to_json(i % 2 == 0 ? FieldBackend::qp(3) : FieldBackend::fp_laurent(3));
                   j["n"] = i / 2 + 1;
                   return j;
                 },
                 {{"witness",
                   [](const json& in) {
                     const FieldBackend f = backend_from_json(in);
                     const auto n = get_as<std::size_t>(in, "n");
                     const auto w = example17_witness(f, n);
                     return expect(w.input_size == NormExp::power(-static_cast<std::int64_t>(n)) && w.deviation == NormExp::power(0),
                                   "witness deviation not bounded away from zero");
                   }},
                  {"identity_at_zero",
                   [](const json& in) {
                     const FieldBackend f = backend_from_json(in);
                     const auto x = unit_vector(f, get_as<std::size_t>(in, "n"), kN);
                     return expect(example17_fixture(PadicNumber::exact_zero(f), x) == x, "H_0(x) != x");
                   }}},
                 40});
  return out;
}

}  // namespace detail

inline const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = detail::build_suites();
  return all;
}

inline const Suite& find_suite(const std::string& name) {
  for (const auto& s : suites())
    if (s.name == name) return s;
  fail(ErrorKind::InvalidArgument, "unknown suite '" + name + "'");
}

/// Runs one property on one input; an exception counts as a failure.
inline std::optional<std::string> run_check(const Check& check, const json& input) {
  try {
    return check(input);
  } catch (const Error& e) {
    return std::string("error: ") + e.what();
  }
}

/// Cases [begin, end) of a suite.
inline SuiteReport run_shard(const Suite& suite, std::uint64_t seed, std::uint64_t begin, std::uint64_t end) {
  SuiteReport r{suite.name, seed, static_cast<std::size_t>(end - begin), {}, {}, std::nullopt};
  for (const auto& [name, check] : suite.properties) r.properties[name];
  for (std::uint64_t i = begin; i < end; ++i) {
    Sampler s(case_seed(seed, i));
    const json input = suite.generate(s, i);
    for (const auto& [name, check] : suite.properties) {
      if (auto why = run_check(check, input)) {
        ++r.properties[name].fail;
        r.counterexamples.push_back({suite.name, name, seed, i, input, *why});
      } else {
        ++r.properties[name].pass;
      }
    }
  }
  return r;
}

/// Associative, order-independent merge of reports of the same suite and seed.
inline SuiteReport merge(SuiteReport a, const SuiteReport& b) {
  if (a.suite != b.suite || a.seed != b.seed) fail(ErrorKind::InvalidArgument, "merging reports of different suites or seeds");
  a.cases += b.cases;
  for (const auto& [name, t] : b.properties) {
    auto& dst = a.properties[name];
    dst.pass += t.pass;
    dst.fail += t.fail;
  }
  a.counterexamples.insert(a.counterexamples.end(), b.counterexamples.begin(), b.counterexamples.end());
  std::sort(a.counterexamples.begin(), a.counterexamples.end(), [](const auto& x, const auto& y) {
    return std::tie(x.case_index, x.property) < std::tie(y.case_index, y.property);
  });
  if (b.wall_seconds) a.wall_seconds = a.wall_seconds.value_or(0.0) + *b.wall_seconds;
  return a;
}

/// Shards cases across `jobs` worker threads. The result does not depend on `jobs`.
inline SuiteReport run_suite(const Suite& suite, std::uint64_t seed, std::size_t cases, std::size_t jobs = 1,
                             bool timing = false) {
  jobs = std::max<std::size_t>(1, std::min(jobs, std::max<std::size_t>(cases, 1)));
  std::vector<SuiteReport> parts(jobs);
  auto work = [&](std::size_t w) {
    const auto t0 = std::chrono::steady_clock::now();
    parts[w] = run_shard(suite, seed, cases * w / jobs, cases * (w + 1) / jobs);
    if (timing) parts[w].wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  SuiteReport out = parts[0];
  for (std::size_t w = 1; w < jobs; ++w) out = merge(std::move(out), parts[w]);
  return out;
}

inline json to_json(const Counterexample& c) {
  return {{"schema_version", kSchemaVersion}, {"suite", c.suite}, {"property", c.property}, {"seed", c.seed},
          {"case", c.case_index},          {"input", c.input}, {"message", c.message}};
}

inline Counterexample counterexample_from_json(const json& j) {
  return {detail::get_as<std::string>(j, "suite"), detail::get_as<std::string>(j, "property"),
          detail::get_as<std::uint64_t>(j, "seed"), detail::get_as<std::uint64_t>(j, "case"), detail::field(j, "input"),
          j.value("message", std::string())};
}

inline json to_json(const SuiteReport& r) {
  json props = json::object();
  for (const auto& [name, t] : r.properties) props[name] = {{"pass", t.pass}, {"fail", t.fail}};
  json ces = json::array();
  for (const auto& c : r.counterexamples) ces.push_back(to_json(c));
  json j = {{"schema_version", kSchemaVersion}, {"suite", r.suite},   {"seed", r.seed},          {"cases", r.cases},
            {"passed", r.passed()},            {"properties", props}, {"counterexamples", ces}};
  if (r.wall_seconds) j["wall_seconds"] = *r.wall_seconds;
  return j;
}

inline SuiteReport report_from_json(const json& j) {
  SuiteReport r;
  r.suite = detail::get_as<std::string>(j, "suite");
  r.seed = detail::get_as<std::uint64_t>(j, "seed");
  r.cases = detail::get_as<std::size_t>(j, "cases");
  const json& props = detail::field(j, "properties");
  if (!props.is_object()) detail::malformed("properties must be an object");
  for (const auto& [name, t] : props.items())
    r.properties[name] = {detail::get_as<std::size_t>(t, "pass"), detail::get_as<std::size_t>(t, "fail")};
  const json& ces = detail::field(j, "counterexamples");
  if (!ces.is_array()) detail::malformed("counterexamples must be an array");
  for (const auto& c : ces) r.counterexamples.push_back(counterexample_from_json(c));
  if (j.contains("wall_seconds")) r.wall_seconds = detail::get_as<double>(j, "wall_seconds");
  return r;
}

/// Merges reports by (suite, seed); output is sorted and independent of input order.
inline json aggregate(const std::vector<SuiteReport>& reports) {
  std::map<std::pair<std::string, std::uint64_t>, SuiteReport> by_key;
  for (const auto& r : reports) {
    const auto key = std::make_pair(r.suite, r.seed);
    const auto it = by_key.find(key);
    if (it == by_key.end()) by_key.emplace(key, r);
    else it->second = merge(std::move(it->second), r);
  }
  json out = {{"schema_version", kSchemaVersion}, {"suites", json::array()}};
  bool passed = true;
  std::size_t failures = 0;
  for (const auto& [key, r] : by_key) {
    passed = passed && r.passed();
    failures += r.counterexamples.size();
    out["suites"].push_back(to_json(r));
  }
  out["passed"] = passed;
  out["failures"] = failures;
  return out;
}

/// Re-runs a counterexample payload. True when the property still fails.
inline bool replay(const Counterexample& c, std::string* message = nullptr) {
  const Suite& s = find_suite(c.suite);
  for (const auto& [name, check] : s.properties) {
    if (name != c.property) continue;
    const auto why = run_check(check, c.input);
    if (message) *message = why.value_or("");
    return why.has_value();
  }
  fail(ErrorKind::InvalidArgument, "suite '" + c.suite + "' has no property '" + c.property + "'");
}

}  // namespace nahomeo
