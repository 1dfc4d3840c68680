#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nahomeo/chain.hpp"
#include "nahomeo/extension.hpp"

namespace nahomeo {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Values:     {"backend": "qp"|"fp_laurent", "p", "valuation", "digits", "precision", "zero"}
//             zero at precision keeps its absolute bound in "valuation"; exact zero
//             adds "exact": true. Input may also be {"backend", "p", "integer", "precision"}.
// Sequences:  {"prefix": [...], "tail": {"kind": "zero"|"geom_diff"|"generator", ...}, "tag"}
// Balls:      {"center", "radius_exp"}; partitions {"resolution", "balls": [...]}.

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) { fail(ErrorKind::MalformedInput, what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object()) malformed(std::string("expected an object with field '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    malformed(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline json backend_to_json(const FieldBackend& f) {
  return {{"backend", f.kind() == FieldKind::Qp ? "qp" : "fp_laurent"}, {"p", f.p()}};
}

inline FieldBackend backend_from_json(const json& j) {
  const auto kind = detail::get_as<std::string>(j, "backend");
  const auto p = detail::get_as<std::int64_t>(j, "p");
  if (p < 2 || p > FieldBackend::kMaxPrime) detail::malformed("p out of range");
  try {
    if (kind == "qp") return FieldBackend::qp(static_cast<std::uint32_t>(p));
    if (kind == "fp_laurent") return FieldBackend::fp_laurent(static_cast<std::uint32_t>(p));
  } catch (const Error& e) {
    detail::malformed(e.what());
  }
  detail::malformed("unknown backend '" + kind + "'");
}

inline json to_json(const PadicNumber& a) {
  json j = backend_to_json(a.backend());
  if (a.is_exact_zero()) {
    j.update({{"valuation", 0}, {"digits", json::array()}, {"precision", 0}, {"zero", true}, {"exact", true}});
  } else if (a.is_zero()) {
    j.update({{"valuation", a.absolute_precision()}, {"digits", json::array()}, {"precision", 0}, {"zero", true}});
  } else {
    j.update({{"valuation", a.valuation()}, {"digits", a.digits()}, {"precision", a.precision()}, {"zero", false}});
  }
  return j;
}

inline PadicNumber padic_from_json(const json& j) {
  const FieldBackend f = backend_from_json(j);
  if (j.contains("integer")) {
    const auto n = detail::get_as<std::int64_t>(j, "integer");
    const auto prec = j.contains("precision") ? detail::get_as<std::int64_t>(j, "precision") : 32;
    if (prec < 1) detail::malformed("precision must be positive");
    return from_integer(n, f, prec);
  }
  if (detail::get_as<bool>(j, "zero")) {
    if (j.value("exact", false)) return PadicNumber::exact_zero(f);
    return PadicNumber::zero_at(f, detail::get_as<std::int64_t>(j, "valuation"));
  }
  const auto v = detail::get_as<std::int64_t>(j, "valuation");
  const auto raw = detail::get_as<std::vector<std::int64_t>>(j, "digits");
  if (raw.empty()) detail::malformed("nonzero value without digits");
  if (j.contains("precision") && detail::get_as<std::int64_t>(j, "precision") != static_cast<std::int64_t>(raw.size()))
    detail::malformed("precision does not match the digit count");
  std::vector<Digit> digits;
  digits.reserve(raw.size());
  for (const auto d : raw) {
    if (d < 0 || d >= static_cast<std::int64_t>(f.p())) detail::malformed("digit out of range [0, p)");
    digits.push_back(static_cast<Digit>(d));
  }
  return PadicNumber::from_digits(f, v, std::move(digits));
}

inline json to_json(const NormExp& n) { return n.is_zero() ? json(nullptr) : json(n.exponent()); }

inline json tail_to_json(const TailRule& t) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ZeroTail>) {
          return {{"kind", "zero"}};
        } else if constexpr (std::is_same_v<T, GeomDiffTail>) {
          return {{"kind", "geom_diff"}, {"scale", to_json(r.scale)}, {"ratio", to_json(r.ratio)}};
        } else if constexpr (std::is_same_v<T, ConstantTail>) {
          return {{"kind", "generator"}, {"rule", "constant"}, {"value", to_json(r.value)}};
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          return {{"kind", "generator"}, {"rule", "geometric"}, {"scale", to_json(r.scale)}, {"ratio", to_json(r.ratio)}};
        } else if constexpr (std::is_same_v<T, ConstMinusGeomTail>) {
          return {{"kind", "generator"},
                  {"rule", "const_minus_geom"},
                  {"limit", to_json(r.limit)},
                  {"scale", to_json(r.scale)},
                  {"ratio", to_json(r.ratio)}};
        } else {
          json block = json::array();
          for (const auto& b : r.block) block.push_back(to_json(b));
          return {{"kind", "generator"}, {"rule", "periodic"}, {"block", block}};
        }
      },
      t);
}

inline TailRule tail_from_json(const json& j) {
  const auto kind = detail::get_as<std::string>(j, "kind");
  const auto num = [&](const char* k) { return padic_from_json(detail::field(j, k)); };
  if (kind == "zero") return ZeroTail{};
  if (kind == "geom_diff") return GeomDiffTail{num("scale"), num("ratio")};
  if (kind != "generator") detail::malformed("unknown tail kind '" + kind + "'");
  const auto rule = detail::get_as<std::string>(j, "rule");
  if (rule == "constant") return ConstantTail{num("value")};
  if (rule == "geometric") return GeometricTail{num("scale"), num("ratio")};
  if (rule == "const_minus_geom") return ConstMinusGeomTail{num("limit"), num("scale"), num("ratio")};
  if (rule == "periodic") {
    const json& b = detail::field(j, "block");
    if (!b.is_array()) detail::malformed("periodic block must be an array");
    std::vector<PadicNumber> block;
    for (const auto& e : b) block.push_back(padic_from_json(e));
    return PeriodicTail{std::move(block)};
  }
  detail::malformed("unknown generator rule '" + rule + "'");
}

inline SpaceTag tag_from_string(const std::string& s) {
  if (s == "c0") return SpaceTag::c0;
  if (s == "c") return SpaceTag::c;
  if (s == "s") return SpaceTag::s;
  if (s == "none") return SpaceTag::none;
  detail::malformed("unknown tag '" + s + "'");
}

inline json to_json(const SeqVector& v) {
  json pre = json::array();
  for (const auto& a : v.prefix()) pre.push_back(to_json(a));
  json j = backend_to_json(v.backend());
  j.update({{"prefix", pre}, {"tail", tail_to_json(v.tail())}, {"tag", std::string(to_string(v.tag()))}});
  return j;
}

/// The backend comes from the top level when present, else from the first
/// number found.
inline SeqVector seq_from_json(const json& j) {
  const json& pre = detail::field(j, "prefix");
  if (!pre.is_array()) detail::malformed("prefix must be an array");
  std::vector<PadicNumber> prefix;
  for (const auto& e : pre) prefix.push_back(padic_from_json(e));
  TailRule tail = tail_from_json(detail::field(j, "tail"));
  const SpaceTag tag = j.contains("tag") ? tag_from_string(detail::get_as<std::string>(j, "tag")) : SpaceTag::c0;
  std::optional<FieldBackend> f;
  if (j.contains("backend")) f = backend_from_json(j);
  else if (!prefix.empty()) f = prefix.front().backend();
  else
    std::visit(
        [&](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, ConstantTail>) f = r.value.backend();
          else if constexpr (std::is_same_v<T, PeriodicTail>) {
            if (!r.block.empty()) f = r.block.front().backend();
          } else if constexpr (!std::is_same_v<T, ZeroTail>) f = r.scale.backend();
        },
        tail);
  if (!f) detail::malformed("sequence without a backend");
  try {
    return SeqVector(*f, std::move(prefix), std::move(tail), tag);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::BackendMismatch || e.kind() == ErrorKind::InvalidArgument) detail::malformed(e.what());
    throw;
  }
}

inline json to_json(const Ball<PadicNumber>& b) { return {{"center", to_json(b.center)}, {"radius_exp", b.radius_exp}}; }

inline Ball<PadicNumber> ball_from_json(const json& j) {
  return {padic_from_json(detail::field(j, "center")), detail::get_as<std::int64_t>(j, "radius_exp")};
}

inline json to_json(const Partition<PadicNumber>& P) {
  json balls = json::array();
  for (const auto& b : P.balls) balls.push_back(to_json(b));
  return {{"resolution", P.resolution}, {"balls", balls}};
}

inline Partition<PadicNumber> partition_from_json(const json& j) {
  const json& b = detail::field(j, "balls");
  if (!b.is_array()) detail::malformed("balls must be an array");
  Partition<PadicNumber> P;
  P.resolution = detail::get_as<std::int64_t>(j, "resolution");
  for (const auto& e : b) P.balls.push_back(ball_from_json(e));
  return P;
}

inline json to_json(const PresentedSpace& X) {
  return {{"carrier", to_json(X.carrier)}, {"working_precision", X.working_precision}};
}

inline PresentedSpace space_from_json(const json& j) {
  PresentedSpace X{partition_from_json(detail::field(j, "carrier"))};
  if (j.contains("working_precision")) X.working_precision = detail::get_as<std::int64_t>(j, "working_precision");
  return X;
}

/// Ball -> value table.
inline json to_json(const PresentedFunction& g) {
  json rows = json::array();
  for (std::size_t i = 0; i < g.values.size(); ++i)
    rows.push_back({{"ball", to_json(g.domain.balls[i])}, {"value", to_json(g.values[i])}});
  return {{"resolution", g.domain.resolution}, {"bound_exp", g.bound_exp}, {"table", rows}};
}

inline PresentedFunction function_from_json(const json& j) {
  PresentedFunction g;
  g.bound_exp = detail::get_as<std::int64_t>(j, "bound_exp");
  g.domain.resolution = detail::get_as<std::int64_t>(j, "resolution");
  const json& t = detail::field(j, "table");
  if (!t.is_array()) detail::malformed("table must be an array");
  for (const auto& row : t) {
    g.domain.balls.push_back(ball_from_json(detail::field(row, "ball")));
    g.values.push_back(padic_from_json(detail::field(row, "value")));
  }
  return g;
}

inline json to_json(const ModulusTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"delta", r.delta}, {"deviation_exp", to_json(r.deviation)}, {"samples", r.samples}, {"escapes", r.escapes}});
  return {{"schema_version", kSchemaVersion}, {"segment", t.segment}, {"window", t.window}, {"rows", rows}};
}

inline json to_json(const MembershipVerdict& v) {
  json j = {{"verdict", std::string(to_string(v.verdict))}, {"reason", v.reason}, {"depth", v.depth}};
  if (v.index) j["index"] = *v.index;
  return j;
}

}  // namespace nahomeo
