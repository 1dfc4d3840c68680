// Command-line front end. Prints JSON on stdout.
//
// Exit status: 0 ok, 1 property failure, 2 malformed input or usage,
// 3 input rejected by the operation (outside its domain, precision exhausted).

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nahomeo.hpp"

using namespace nahomeo;

namespace {

struct Globals {
  std::uint32_t p = 3;
  std::int64_t precision = 32;
  std::optional<std::size_t> depth;
  std::uint64_t seed = 0;
  std::optional<std::size_t> cases;
  std::size_t jobs = 1;
  std::string format = "json";
  bool timing = false;
};

Globals g;

/// Inline JSON when the argument starts with '{' or '[', else a file path.
json load(const std::string& arg) {
  std::string text = arg;
  const auto first = arg.find_first_not_of(" \t\n");
  if (first == std::string::npos || (arg[first] != '{' && arg[first] != '[')) {
    std::ifstream in(arg);
    if (!in) fail(ErrorKind::MalformedInput, "cannot read '" + arg + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::MalformedInput, std::string("invalid JSON: ") + e.what());
  }
}

/// Fills the backend of bare numbers ({"integer": n} or digit objects) from --p and --precision.
void default_backend(json& j) {
  if (j.is_array()) {
    for (auto& e : j) default_backend(e);
    return;
  }
  if (!j.is_object()) return;
  if ((j.contains("integer") || j.contains("digits")) && !j.contains("backend")) {
    j["backend"] = "qp";
    j["p"] = g.p;
  }
  if (j.contains("integer") && !j.contains("precision")) j["precision"] = g.precision;
  for (auto& [k, v] : j.items()) default_backend(v);
}

json load_input(const std::string& arg) {
  json j = load(arg);
  default_backend(j);
  return j;
}

std::size_t depth_for(const SeqVector& x) { return g.depth.value_or(x.prefix_length() + 8); }

void emit(json out) {
  if (g.format == "pretty")
    std::cout << out.dump(2) << "\n";
  else
    std::cout << out.dump() << "\n";
}

json envelope(json body) {
  body["schema_version"] = kSchemaVersion;
  return body;
}

int cmd_eval(const std::string& op, const std::string& x_arg, const std::string& y_arg, const std::string& set,
             const std::string& direction, std::int64_t levels) {
  const json xj = load_input(x_arg);
  if (op == "lemma6") {
    const PadicNumber x = padic_from_json(xj);
    const Direction d = direction == "inverse" ? Direction::Inverse : Direction::Forward;
    emit(envelope({{"op", op}, {"direction", direction}, {"levels", levels}, {"y", to_json(lemma6_phi(x, d, levels))}}));
    return 0;
  }
  if (op == "norm") {
    emit(envelope({{"op", op}, {"norm_exp", to_json(padic_from_json(xj).norm())}}));
    return 0;
  }
  const SeqVector x = seq_from_json(xj);
  const std::size_t depth = depth_for(x);
  json out = {{"op", op}, {"depth", depth}};
  if (op == "q_forward") {
    out["y"] = to_json(q_forward(x, depth));
    out["precision_demand"] = q_precision_demand(x, depth + 1);
  } else if (op == "q_inverse" || op == "a2_to_a3" || op == "a3_to_a2") {
    out["y"] = to_json(chain_eval(op, x, depth));
  } else if (op == "partial_sums") {
    out["y"] = to_json(partial_sums(x));
  } else if (op == "differences") {
    out["y"] = to_json(differences(x));
  } else if (op == "sup_norm") {
    out["norm_exp"] = to_json(sup_norm(x));
  } else if (op == "membership") {
    static const std::map<std::string, NamedSet> sets = {
        {"A0", NamedSet::A0},  {"A1", NamedSet::A1}, {"A1*", NamedSet::A1Star}, {"A2", NamedSet::A2},
        {"A2*", NamedSet::A2Star}, {"s", NamedSet::S}, {"s*", NamedSet::SStar}};
    const auto it = sets.find(set);
    if (it == sets.end()) fail(ErrorKind::MalformedInput, "unknown set '" + set + "'");
    out["set"] = set;
    out["verdict"] = to_json(membership(x, it->second, depth));
  } else if (op == "s_metric") {
    if (y_arg.empty()) fail(ErrorKind::MalformedInput, "s_metric needs --y");
    const auto v = s_metric(x, seq_from_json(load_input(y_arg)), depth);
    out["value"] = v.value.str();
    out["tail_bound"] = v.tail_bound.str();
  } else {
    fail(ErrorKind::MalformedInput, "unknown op '" + op + "'");
  }
  emit(envelope(out));
  return 0;
}

int report_exit(const SuiteReport& r) {
  emit(to_json(r));
  return r.passed() ? 0 : 1;
}

int cmd_suite(const std::string& name, const std::string& out_file) {
  const Suite& s = find_suite(name);
  const auto r = run_suite(s, g.seed, g.cases.value_or(s.default_cases), g.jobs, g.timing);
  if (!out_file.empty()) {
    std::ofstream o(out_file);
    o << to_json(r).dump(2) << "\n";
  }
  return report_exit(r);
}

int cmd_roundtrip(const std::string& pair) {
  static const std::map<std::string, std::string> pairs = {
      {"q", "q"}, {"partial_sums", "partial_sums"}, {"a2_a3", "a2_to_a3"}, {"lemma6", "lemma6"}, {"isotopy", "isotopy"}};
  const auto it = pairs.find(pair);
  if (it == pairs.end()) fail(ErrorKind::MalformedInput, "unknown pair '" + pair + "'");
  const Suite& s = find_suite(it->second);
  return report_exit(run_suite(s, g.seed, g.cases.value_or(s.default_cases), g.jobs, g.timing));
}

int cmd_report(const std::vector<std::string>& files) {
  std::vector<SuiteReport> reports;
  for (const auto& f : files) {
    const json j = load(f);
    if (j.contains("suites")) {
      for (const auto& r : detail::field(j, "suites")) reports.push_back(report_from_json(r));
    } else {
      reports.push_back(report_from_json(j));
    }
  }
  const json out = aggregate(reports);
  emit(out);
  return out["passed"].get<bool>() ? 0 : 1;
}

int cmd_replay(const std::string& payload) {
  const json j = load(payload);
  const Counterexample c = counterexample_from_json(j.contains("counterexamples") ? detail::field(j, "counterexamples").at(0) : j);
  std::string why;
  const bool fails = replay(c, &why);
  emit(envelope({{"suite", c.suite}, {"property", c.property}, {"reproduced", fails}, {"message", why}}));
  return fails ? 1 : 0;
}

int cmd_extend(const std::string& space, const std::string& function, std::int64_t levels) {
  const PresentedSpace X = space_from_json(load_input(space));
  const PresentedFunction f = function_from_json(load_input(function));
  const Extension e(X, f);
  const auto [steps, gn] = e.run(levels);
  json stages = json::array();
  for (const auto& s : steps) stages.push_back({{"n", s.n}, {"u", to_json(s.u)}, {"next", to_json(s.next)}});
  json gaps = json::array();
  for (std::int64_t n = 1; n < levels; ++n) gaps.push_back({{"n", n}, {"gap_exp", to_json(e.stage_gap(n))}});
  emit(envelope({{"levels", levels}, {"stages", stages}, {"stage_gaps", gaps}, {"g", to_json(gn)}}));
  return 0;
}

int cmd_isotopy(const std::string& name, const std::string& t_arg, const std::string& x_arg, bool inverse, bool trace) {
  const PadicNumber t = padic_from_json(load_input(t_arg));
  const SeqVector x = seq_from_json(load_input(x_arg));
  const auto all = shipped_isotopies(x.backend());
  const auto it = all.find(name);
  if (it == all.end()) fail(ErrorKind::MalformedInput, "unknown isotopy '" + name + "'");
  const auto& H = it->second;
  json out = {{"name", name}, {"support", H.support.to_string()}, {"inverse", inverse}};
  out["y"] = to_json(inverse ? H.inv_eval(x, t) : H.eval(x, t));
  if (trace) {
    json states = json::array();
    if (name == "push_c01" && !inverse) {
      const auto tr = push_point_c01_trace(t, x);
      for (const auto& s : tr.states) states.push_back(to_json(s));
      out["factors"] = tr.factors;
    } else {
      states.push_back(out["y"]);
      out["factors"] = 1;
    }
    out["trace"] = states;
  }
  emit(envelope(out));
  return 0;
}

std::vector<std::int64_t> parse_deltas(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::MalformedInput, "bad delta '" + item + "'");
    }
  }
  if (out.empty()) fail(ErrorKind::MalformedInput, "no deltas");
  return out;
}

int cmd_chain(const std::string& action, const std::string& segment, const std::string& x_arg, const std::string& deltas,
              std::size_t samples) {
  if (action == "list") {
    json segs = json::array();
    for (const auto& s : chain_segments())
      segs.push_back({{"name", s.name},
                      {"domain", s.domain},
                      {"codomain", s.codomain},
                      {"status", s.callable ? "callable" : "property-verified only"}});
    emit(envelope({{"segments", segs}}));
    return 0;
  }
  const json xj = load_input(x_arg);
  if (action == "eval" && segment == "lemma6") {
    emit(envelope({{"segment", segment}, {"y", to_json(lemma6_phi(padic_from_json(xj), Direction::Forward, 6))}}));
    return 0;
  }
  const SeqVector x = seq_from_json(xj);
  const std::size_t depth = depth_for(x);
  if (action == "eval") {
    emit(envelope({{"segment", segment}, {"depth", depth}, {"y", to_json(chain_eval(segment, x, depth))}}));
    return 0;
  }
  emit(to_json(continuity_probe(segment, x, parse_deltas(deltas), samples, depth, g.seed)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-archimedean sequence spaces, extensions and isotopies"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--p", g.p, "prime for bare numbers")->check(CLI::Range(2u, FieldBackend::kMaxPrime));
  app.add_option("--precision", g.precision, "digits for bare integers")->check(CLI::PositiveNumber);
  app.add_option("--depth", g.depth, "coordinates to certify (default: prefix length + 8)");
  app.add_option("--seed", g.seed, "suite seed");
  app.add_option("--cases", g.cases, "cases per suite");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "json or pretty")->check(CLI::IsMember({"json", "pretty"}));
  app.add_flag("--timing", g.timing, "record wall-clock in reports");

  std::string op, x_arg, y_arg, set = "A1*", direction = "forward";
  std::int64_t levels = 6;
  auto* eval = app.add_subcommand("eval", "evaluate one operation");
  eval->add_option("--op", op)->required();
  eval->add_option("--x", x_arg)->required();
  eval->add_option("--y", y_arg);
  eval->add_option("--set", set);
  eval->add_option("--direction", direction)->check(CLI::IsMember({"forward", "inverse"}));
  eval->add_option("--levels", levels)->check(CLI::PositiveNumber);

  std::string pair;
  auto* roundtrip = app.add_subcommand("roundtrip", "forward/inverse pairs on sampled inputs");
  roundtrip->add_option("--pair", pair)->required();
  roundtrip->add_option("--samples", g.cases);

  std::string suite_name, out_file;
  bool list_suites = false;
  auto* suite = app.add_subcommand("suite", "run a property suite");
  suite->add_option("--name", suite_name);
  suite->add_option("--out", out_file, "also write the report here");
  suite->add_flag("--list", list_suites);

  std::vector<std::string> report_files;
  auto* report = app.add_subcommand("report", "merge suite reports");
  report->add_option("files", report_files)->required();

  std::string payload;
  auto* replay_cmd = app.add_subcommand("replay", "re-run a counterexample payload");
  replay_cmd->add_option("--payload", payload)->required();

  std::string space, function;
  std::int64_t ext_levels = 6;
  auto* extend_cmd = app.add_subcommand("extend", "extend a locally constant function");
  extend_cmd->add_option("--space", space)->required();
  extend_cmd->add_option("--function", function)->required();
  extend_cmd->add_option("--levels", ext_levels)->check(CLI::Range(2, 64));

  std::string iso_name, t_arg, iso_x;
  bool trace = false, inverse = false;
  auto* isotopy = app.add_subcommand("isotopy", "shipped isotopies");
  auto* iso_eval = isotopy->add_subcommand("eval", "evaluate H_t(x)");
  isotopy->require_subcommand(1);
  iso_eval->add_option("--name", iso_name)->required();
  iso_eval->add_option("--t", t_arg)->required();
  iso_eval->add_option("--x", iso_x)->required();
  iso_eval->add_flag("--inverse", inverse);
  iso_eval->add_flag("--trace", trace);

  std::string segment, chain_x, deltas = "1,2,3";
  std::size_t samples = 100;
  auto* chain = app.add_subcommand("chain", "homeomorphism chain segments");
  chain->require_subcommand(1);
  auto* chain_eval_cmd = chain->add_subcommand("eval", "evaluate a segment");
  chain_eval_cmd->add_option("--segment", segment)->required();
  chain_eval_cmd->add_option("--x", chain_x)->required();
  auto* probe = chain->add_subcommand("probe", "empirical continuity modulus");
  probe->add_option("--segment", segment)->required();
  probe->add_option("--x", chain_x)->required();
  probe->add_option("--deltas", deltas);
  probe->add_option("--samples", samples);
  auto* chain_list = chain->add_subcommand("list", "list segments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(op, x_arg, y_arg, set, direction, levels);
    if (*roundtrip) return cmd_roundtrip(pair);
    if (*suite) {
      if (list_suites) {
        json names = json::array();
        for (const auto& s : suites())
          names.push_back({{"name", s.name}, {"summary", s.summary}, {"default_cases", s.default_cases}});
        emit(envelope({{"suites", names}}));
        return 0;
      }
      if (suite_name.empty()) fail(ErrorKind::MalformedInput, "suite needs --name or --list");
      return cmd_suite(suite_name, out_file);
    }
    if (*report) return cmd_report(report_files);
    if (*replay_cmd) return cmd_replay(payload);
    if (*extend_cmd) return cmd_extend(space, function, ext_levels);
    if (*iso_eval) return cmd_isotopy(iso_name, t_arg, iso_x, inverse, trace);
    if (*chain_list) return cmd_chain("list", "", "", "", 0);
    if (*chain_eval_cmd) return cmd_chain("eval", segment, chain_x, "", 0);
    if (*probe) return cmd_chain("probe", segment, chain_x, deltas, samples);
  } catch (const Error& e) {
    emit(envelope({{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}));
    if (e.kind() == ErrorKind::MalformedInput) return 2;
    if (e.kind() == ErrorKind::InvalidArgument) return 2;
    return 3;
  } catch (const json::exception& e) {
    emit(envelope({{"error", "MalformedInput"}, {"message", e.what()}}));
    return 2;
  }
  return 2;
}
