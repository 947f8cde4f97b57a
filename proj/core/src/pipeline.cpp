#include "zkgame/pipeline.hpp"

#include <charconv>
#include <set>

#include "zkgame/error.hpp"
#include "zkgame/json_io.hpp"
#include "zkgame/obliviation.hpp"

namespace zkgame {
namespace {

const std::map<std::string, std::vector<std::string>>& pass_params() {
  static const std::map<std::string, std::vector<std::string>> p = {
      {"cc", {}},          {"cv", {}},         {"oracularize", {}}, {"repeat", {"k"}},
      {"obliviate", {"k"}}, {"tableau", {"l"}}, {"pzk", {"l", "k"}},
  };
  return p;
}

// Shape of cv_game(b) without building it.
struct Shape {
  std::size_t questions = 0, support = 0;
  int question_bits = 0, answer_bits = 0;
};

Shape bcs_shape(const Bcs& b) {
  const auto groups = effective_groups(b);
  const auto gi = group_index(b);
  Shape s;
  s.questions = b.constraints.size() + groups.size();
  s.question_bits = bits_for(s.questions);
  std::set<std::pair<int, int>> pairs;
  const int m = b.m();
  for (int i = 0; i < m; ++i) {
    const auto& c = b.constraints[i];
    s.answer_bits = std::max(s.answer_bits, static_cast<int>(c.scope.size()));
    pairs.insert({i, i});
    std::set<int> touched;
    for (int v : c.scope) touched.insert(gi[v]);
    for (int j : touched) {
      pairs.insert({m + j, m + j});
      pairs.insert({i, m + j});
      pairs.insert({m + j, i});
    }
  }
  for (const auto& g : groups) s.answer_bits = std::max(s.answer_bits, static_cast<int>(g.vars.size()));
  s.support = pairs.size();
  return s;
}

TransformReport bcs_report(const Shape& before, const Shape& after, const PassSpec& p) {
  TransformReport r;
  r.pass = p.text;
  r.params = p.params;
  r.x_before = r.y_before = before.questions;
  r.x_after = r.y_after = after.questions;
  r.question_bits_before = before.question_bits;
  r.question_bits_after = after.question_bits;
  r.answer_bits_before = before.answer_bits;
  r.answer_bits_after = after.answer_bits;
  r.support_before = before.support;
  r.support_after = after.support;
  return r;
}

}  // namespace

PassSpec parse_pass(std::string_view text) {
  PassSpec p;
  p.text = std::string(text);
  const auto colon = text.find(':');
  p.name = std::string(text.substr(0, colon));
  const auto it = pass_params().find(p.name);
  if (it == pass_params().end()) throw Error(Errc::kInvalidArgument, "unknown pass \"" + p.name + "\"");
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw Error(Errc::kInvalidArgument, "malformed parameter in \"" + p.text + "\"");
      const std::string key(item.substr(0, eq));
      const auto val = item.substr(eq + 1);
      int v = 0;
      const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
      if (ec != std::errc() || ptr != val.data() + val.size()) {
        throw Error(Errc::kInvalidArgument, "parameter " + key + " of \"" + p.text + "\" is not an integer");
      }
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        throw Error(Errc::kInvalidArgument, "pass " + p.name + " has no parameter " + key);
      }
      p.params[key] = v;
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  for (const auto& key : it->second) {
    if (!p.params.count(key)) throw Error(Errc::kInvalidArgument, "pass " + p.name + " needs " + key + "=");
  }
  return p;
}

PipelineResult run_pipeline(const Bcs& source, const std::vector<PassSpec>& passes) {
  PipelineResult res;
  res.bcs = source;
  std::optional<ObliviatedBcs> obl;
  json builder = {{"source", bcs_to_json(source)}, {"passes", json::array()}};

  for (std::size_t idx = 0; idx < passes.size(); ++idx) {
    const auto& p = passes[idx];
    builder["passes"].push_back(p.text);
    try {
      const bool bcs_pass = p.name == "obliviate" || p.name == "tableau" || p.name == "pzk";
      if (bcs_pass || p.name == "cc" || p.name == "cv") {
        if (res.game) throw Error(Errc::kInvalidArgument, "pass " + p.name + " needs a BCS, not a game");
      } else if (!res.game) {
        throw Error(Errc::kInvalidArgument, "pass " + p.name + " needs a game; run cc or cv first");
      }
      if (bcs_pass) {
        const Shape before = bcs_shape(res.bcs);
        if (p.name == "obliviate") {
          obl = obliviate(res.bcs, p.params.at("k"));
          res.bcs = obl->flat;
          res.tableau.reset();
        } else {
          auto t = p.name == "tableau" ? (obl ? tableau(*obl, p.params.at("l")) : tableau(res.bcs, p.params.at("l")))
                                       : pzk_transform(res.bcs, p.params.at("l"), p.params.at("k"));
          for (const auto& w : t.warnings) res.warnings.push_back(p.text + ": " + w);
          res.bcs = t.bcs;
          res.tableau = std::make_shared<const TableauBcs>(std::move(t));
          obl.reset();
        }
        res.reports.push_back(bcs_report(before, bcs_shape(res.bcs), p));
        continue;
      }
      if (p.name == "cc" || p.name == "cv") {
        auto g = p.name == "cc" ? cc_game(res.bcs) : cv_game(res.bcs);
        const Shape before = bcs_shape(res.bcs);
        auto r = report(g, g, p.text, p.params);
        r.x_before = r.y_before = before.questions;
        r.question_bits_before = before.question_bits;
        r.answer_bits_before = before.answer_bits;
        r.support_before = before.support;
        res.reports.push_back(std::move(r));
        res.game = std::move(g);
      } else {
        auto g = p.name == "oracularize" ? oracularize(*res.game) : parallel_repeat(*res.game, p.params.at("k"));
        res.reports.push_back(report(*res.game, g, p.text, p.params));
        res.game = std::move(g);
      }
      res.game->builder = builder;
    } catch (const Error& e) {
      throw Error(e.code(), "pass " + std::to_string(idx) + " (" + p.text + "): " + e.what());
    }
  }
  return res;
}

NonlocalGame game_from_json(const nlohmann::json& j) {
  if (!j.contains("builder") || !j.at("builder").contains("source")) {
    throw ParseError(0, "game has no builder record");
  }
  const auto& b = j.at("builder");
  std::vector<PassSpec> passes;
  for (const auto& t : b.at("passes")) passes.push_back(parse_pass(t.get<std::string>()));
  auto res = run_pipeline(bcs_from_json(b.at("source")), passes);
  if (!res.game) throw ParseError(0, "builder passes produce no game");
  if (j.contains("mu") && j.at("mu").size() != res.game->mu().size()) {
    throw ParseError(0, "rebuilt game does not match the stored support");
  }
  return std::move(*res.game);
}

}  // namespace zkgame
