#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "zkgame/dimacs.hpp"
#include "zkgame/error.hpp"
#include "zkgame/json_io.hpp"
#include "zkgame/pipeline.hpp"
#include "zkgame/quantum.hpp"
#include "zkgame/referee.hpp"
#include "zkgame/tableau_oracle.hpp"
#include "zkgame/zk_sim.hpp"

namespace zkgame::cli {
namespace {

constexpr const char* kTiny3Sat = "p cnf 3 2\n1 2 3 0\n-1 2 -3 0\n";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kInvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<PassSpec> parse_passes(const std::vector<std::string>& passes) {
  std::vector<PassSpec> out;
  for (const auto& p : passes) out.push_back(parse_pass(p));
  return out;
}

PipelineResult pipeline(const SourceSpec& src, const std::vector<std::string>& passes) {
  return run_pipeline(load_source(src), parse_passes(passes));
}

const NonlocalGame& need_game(const PipelineResult& r) {
  if (!r.game) throw Error(Errc::kInvalidArgument, "the passes build no game; add cc or cv");
  return *r.game;
}

std::vector<Sign> witness_for(const TableauBcs& t) {
  const auto a = brute_force_satisfiable(t.obl.base);
  if (!a) throw Error(Errc::kNotAWitness, "the source BCS is unsatisfiable");
  std::vector<Sign> w(t.obl.base.n, 1);
  for (const auto& [v, s] : *a) w[v] = s;
  return w;
}

const TableauBcs& need_tableau(const PipelineResult& r) {
  if (!r.tableau) throw Error(Errc::kInvalidArgument, "not a tableau game; add a tableau or pzk pass");
  return *r.tableau;
}

std::shared_ptr<const AnswerSampler> prover_for(const NonlocalGame& g, const PipelineResult& r,
                                                const std::string& name) {
  if (g.kind == GameKind::kRepeated) return sim_parallel(prover_for(*g.base, r, name), g);
  if (g.kind == GameKind::kOracularized) return sim_oracularized(prover_for(*g.base, r, name), g);
  if (name == "pauli") {
    if (!g.bcs || g.bcs->n != 9 || g.bcs->m() != 6 || (g.kind != GameKind::kCC && g.kind != GameKind::kCV)) {
      throw Error(Errc::kInvalidArgument, "pauli provers need the magic-square cc or cv game");
    }
    return std::make_shared<StrategySampler>(g.kind == GameKind::kCV ? magic_square_strategy()
                                                                     : magic_square_cc_strategy());
  }
  if (name == "classical") {
    return std::make_shared<CorrelationSampler>(
        CorrelationSampler::from_deterministic(g, classical_value_with_strategy(g).strategy));
  }
  if (name == "honest" || name == "simulator") {
    if (g.kind != GameKind::kCV || !r.tableau) {
      throw Error(Errc::kInvalidArgument, name + " provers need the cv game of a tableau");
    }
    auto t = r.tableau;
    if (name == "simulator") return std::make_shared<TableauSimulator>(t);
    return std::make_shared<HonestTableauSampler>(t, witness_for(*t));
  }
  throw Error(Errc::kInvalidArgument, "unknown provers \"" + name + "\"");
}

json uniformity_suite(const TableauBcs& t, const std::vector<Sign>& w, const ZkTestOptions& o) {
  const int k = t.k();
  const int n = t.obl.base.n;
  std::vector<std::vector<int>> subsets;
  for (int v = 0; v < n; ++v) {
    std::vector<int> s;
    for (int c = 1; c < k; ++c) s.push_back(t.copy_group(v, c));
    subsets.push_back(s);
  }
  // a few mixed subsets across variables
  Rng rng = Rng::substream(o.seed, "zk-test/uniformity");
  for (int rep = 0; rep < 3 && n > 1; ++rep) {
    std::vector<int> all(static_cast<std::size_t>(n) * k);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t j = all.size(); j > 1; --j) std::swap(all[j - 1], all[rng.below(j)]);
    all.resize(k - 1);
    std::sort(all.begin(), all.end());
    subsets.push_back(all);
  }
  json checks = json::array();
  bool pass = true;
  for (const auto& s : subsets) {
    const auto v = uniformity_test(t, w, s, o.exact, o.samples, o.seed);
    json names = json::array();
    for (int g : s) names.push_back(t.bcs.groups[g].name);
    json c = {{"subset", names}, {"uniform", v.uniform}};
    if (o.exact) {
      c["distance"] = to_string(v.distance);
    } else {
      c["p_value"] = v.p_value;
    }
    pass = pass && v.uniform;
    checks.push_back(std::move(c));
  }
  return {{"suite", "uniformity"}, {"exact", o.exact}, {"checks", checks}, {"pass", pass}};
}

json probe_suite(const TableauBcs& t, const std::vector<Sign>& w) {
  std::vector<int> pins;
  for (int c = 0; c < t.bcs.m(); ++c) {
    if (t.clauses[c].kind == ClauseKind::kPin) pins.push_back(c);
  }
  std::vector<std::vector<int>> probes;
  for (int c : pins) probes.push_back({c});
  for (std::size_t j = 0; j + 1 < pins.size() && j < 8; ++j) probes.push_back({pins[j], pins[j + 1]});
  ProbeOptions po;
  po.allow_below_threshold = true;
  po.exhaustive_limit = 20000;
  const auto rep = dishonest_probe(t, w, probes, po);
  json violations = json::array();
  for (const auto& v : rep.violations) {
    json names = json::array();
    for (int g : v.groups) names.push_back(t.bcs.groups[g].name);
    violations.push_back({{"questions", v.questions}, {"subset", names}, {"distance", to_string(v.distance)}});
  }
  return {{"suite", "probe"},
          {"below_threshold", t.ell < 8 || t.k() < 9},
          {"probes", rep.probes},
          {"subsets_checked", rep.subsets_checked},
          {"exhaustive", rep.exhaustive},
          {"violations", violations},
          {"pass", rep.violations.empty()}};
}

json fidelity_suite(const TableauBcs& t, const std::vector<Sign>& w, const ZkTestOptions& o) {
  json checks = json::array();
  bool pass = true;
  int done = 0;
  for (int c = 0; c < t.bcs.m() && done < o.fidelity_limit; ++c) {
    const auto& ci = t.clauses[c];
    if (ci.kind == ClauseKind::kPin) continue;
    const auto sim = sim_tableau_question(t, c);
    const auto hon = honest_marginal(t, w, sim.groups);
    const Rational d = statistical_distance(sim, hon);
    const char* kind = ci.kind == ClauseKind::kProduct ? "product" : "propagate";
    checks.push_back({{"question", c},
                      {"kind", kind},
                      {"p", ci.p},
                      {"q", ci.q},
                      {"distance", to_string(d)}});
    pass = pass && d == 0;
    ++done;
  }
  return {{"suite", "fidelity"}, {"checks", checks}, {"pass", pass}};
}

void emit(const json& j, const std::string& out_path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw Error(Errc::kInvalidArgument, "cannot write " + out_path);
  f << text;
}

}  // namespace

Bcs load_source(const SourceSpec& src) {
  const int given = !src.builtin.empty() + !src.cnf.empty() + !src.bcs.empty();
  if (given != 1) throw Error(Errc::kInvalidArgument, "give exactly one of --builtin, --cnf, --bcs");
  CnfOptions co;
  co.c_max = src.c_max;
  if (!src.cnf.empty()) return bcs_from_cnf(read_file(src.cnf), co);
  if (!src.bcs.empty()) {
    try {
      return bcs_from_json(json::parse(read_file(src.bcs)));
    } catch (const json::exception& e) {
      throw ParseError(0, e.what());
    }
  }
  if (src.builtin == "magic-square") return magic_square();
  if (src.builtin == "tiny-3sat") return bcs_from_cnf(kTiny3Sat, co);
  throw Error(Errc::kInvalidArgument, "unknown builtin \"" + src.builtin + "\"");
}

CommandResult cmd_build(const SourceSpec& src) { return {bcs_to_json(load_source(src)), true}; }

CommandResult cmd_transform(const SourceSpec& src, const std::vector<std::string>& passes,
                            std::uint64_t seed) {
  const auto r = pipeline(src, passes);
  json reports = json::array();
  for (const auto& rep : r.reports) reports.push_back(to_json(rep));
  json out = {{"schema_version", kSchemaVersion},
              {"seed", seed},
              {"passes", passes},
              {"reports", reports},
              {"warnings", r.warnings},
              {"bcs", {{"n", r.bcs.n}, {"m", r.bcs.m()}, {"groups", effective_groups(r.bcs).size()}}}};
  if (r.game) out["game"] = game_to_json(*r.game);
  return {out, true};
}

CommandResult cmd_value(const SourceSpec& src, const std::vector<std::string>& passes,
                        bool classical, const std::string& strategy) {
  if (!classical && strategy.empty()) throw Error(Errc::kInvalidArgument, "give --classical or --strategy NAME");
  const auto r = pipeline(src, passes);
  const auto& g = need_game(r);
  json out = {{"schema_version", kSchemaVersion}, {"game", g.name()}};
  if (classical) {
    const auto v = classical_value(g);
    out["method"] = "classical";
    out["value"] = to_string(v);
    out["value_float"] = to_double(v);
    return {out, true};
  }
  if (strategy != "pauli") throw Error(Errc::kInvalidArgument, "unknown strategy \"" + strategy + "\"");
  if (!g.bcs || g.kind == GameKind::kOracularized || g.kind == GameKind::kRepeated) {
    throw Error(Errc::kInvalidArgument, "strategy pauli needs the magic-square cc or cv game");
  }
  const auto s = g.kind == GameKind::kCV ? magic_square_strategy() : magic_square_cc_strategy();
  out["method"] = "strategy";
  out["strategy"] = strategy;
  out["value"] = strategy_value(g, s);
  return {out, true};
}

CommandResult cmd_zk_test(const SourceSpec& src, const std::vector<std::string>& passes,
                          const ZkTestOptions& o) {
  const auto r = pipeline(src, passes);
  const auto& t = need_tableau(r);
  const auto w = witness_for(t);
  json suites = json::array();
  bool pass = true;
  auto add = [&](json s) {
    pass = pass && s.at("pass").get<bool>();
    suites.push_back(std::move(s));
  };
  const bool all = o.suite == "all";
  if (!all && o.suite != "uniformity" && o.suite != "probe" && o.suite != "fidelity") {
    throw Error(Errc::kInvalidArgument, "unknown suite \"" + o.suite + "\"");
  }
  if (all || o.suite == "uniformity") add(uniformity_suite(t, w, o));
  if (all || o.suite == "probe") add(probe_suite(t, w));
  if (all || o.suite == "fidelity") add(fidelity_suite(t, w, o));
  return {{{"schema_version", kSchemaVersion},
           {"params", {{"l", t.ell}, {"k", t.k()}}},
           {"seed", o.seed},
           {"suites", suites},
           {"pass", pass}},
          pass};
}

CommandResult cmd_run(const SourceSpec& src, const std::vector<std::string>& passes,
                      const std::string& provers, const std::string& policy, std::size_t rounds,
                      std::uint64_t seed, int jobs) {
  const auto r = pipeline(src, passes);
  const auto& g = need_game(r);
  const auto p = prover_for(g, r, provers);
  VerifierPolicy vp;
  if (policy == "uniform") {
    vp = VerifierPolicy::UniformAll(g);
  } else if (policy != "honest") {
    throw Error(Errc::kInvalidArgument, "unknown policy \"" + policy + "\"");
  }
  const auto t = run_protocol(g, *p, vp, rounds, seed, jobs);
  return {transcript_to_json(t), true};
}

int main_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"zkgame: nonlocal games, zero-knowledge transforms and simulators"};
  app.require_subcommand(1);

  SourceSpec src;
  std::vector<std::string> passes;
  std::uint64_t seed = 0;
  std::string out_path;
  auto add_source = [&](CLI::App* c) {
    c->add_option("--builtin", src.builtin, "magic-square | tiny-3sat");
    c->add_option("--cnf", src.cnf, "DIMACS CNF file");
    c->add_option("--bcs", src.bcs, "BCS JSON file");
    c->add_option("--c-max", src.c_max, "widest allowed clause")->default_val(8);
    c->add_option("--out", out_path, "write JSON here instead of stdout");
  };
  auto add_passes = [&](CLI::App* c) {
    c->add_option("--pass", passes, "pass, repeatable: cc cv oracularize repeat:k= obliviate:k= tableau:l= pzk:l=,k=");
    c->add_option("--seed", seed, "seed for every random choice")->default_val(0);
  };

  auto* build = app.add_subcommand("build", "emit the source BCS as JSON");
  add_source(build);

  auto* transform = app.add_subcommand("transform", "apply passes and report sizes");
  add_source(transform);
  add_passes(transform);

  bool classical = false;
  std::string strategy;
  auto* value = app.add_subcommand("value", "classical value or a named strategy's value");
  add_source(value);
  add_passes(value);
  value->add_flag("--classical", classical, "exact classical value");
  value->add_option("--strategy", strategy, "pauli");

  ZkTestOptions zo;
  bool exact = false;
  auto* zk = app.add_subcommand("zk-test", "zero-knowledge checks on a tableau");
  add_source(zk);
  add_passes(zk);
  zk->add_option("--suite", zo.suite, "uniformity | probe | fidelity | all")->default_val("all");
  zk->add_flag("--exact", exact, "exact enumeration instead of sampling");
  zk->add_option("--samples", zo.samples, "samples per sampling-mode test");
  zk->add_option("--limit", zo.fidelity_limit, "clause questions checked by the fidelity suite");

  std::string provers = "classical", policy = "honest";
  std::size_t rounds = 1000;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "play rounds against provers and emit a transcript");
  add_source(run);
  add_passes(run);
  run->add_option("--provers", provers, "pauli | classical | honest | simulator");
  run->add_option("--policy", policy, "honest | uniform");
  run->add_option("--rounds", rounds, "number of rounds");
  run->add_option("--jobs", jobs, "worker threads (output does not depend on it)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    CommandResult res;
    if (*build) {
      res = cmd_build(src);
    } else if (*transform) {
      res = cmd_transform(src, passes, seed);
    } else if (*value) {
      res = cmd_value(src, passes, classical, strategy);
    } else if (*zk) {
      zo.exact = exact;
      zo.seed = seed;
      res = cmd_zk_test(src, passes, zo);
    } else {
      res = cmd_run(src, passes, provers, policy, rounds, seed, jobs);
    }
    emit(res.report, out_path, out);
    return res.pass ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace zkgame::cli
