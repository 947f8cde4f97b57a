#include "zkgame/json_io.hpp"

#include <limits>

#include "zkgame/error.hpp"
#include "zkgame/s5.hpp"

namespace zkgame {
namespace {

[[noreturn]] void bad(const std::string& msg) { throw ParseError(0, msg); }

json big_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

BigInt big_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  bad("expected an integer");
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

json answer_to_json(const Answer& a) {
  json out = json::array();
  for (Sign s : a) out.push_back(static_cast<int>(s));
  return out;
}

Answer answer_from_json(const json& j) {
  if (!j.is_array()) bad("answer must be an array of +-1");
  Answer out;
  for (const auto& v : j) {
    const int s = v.get<int>();
    if (s != 1 && s != -1) bad("answer entries must be +-1");
    out.push_back(static_cast<Sign>(s));
  }
  return out;
}

std::string kind_name(GameKind k) {
  switch (k) {
    case GameKind::kPlain: return "plain";
    case GameKind::kCC: return "cc";
    case GameKind::kCV: return "cv";
    case GameKind::kOracularized: return "oracularized";
    case GameKind::kRepeated: return "repeated";
  }
  return "plain";
}

json s5_to_json(const S5Relation& rel) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, S5Pin>) {
          return {{"kind", "pin"}, {"copies", r.copies}, {"plus", r.plus.code()}, {"minus", r.minus.code()}};
        } else if constexpr (std::is_same_v<T, S5Propagate>) {
          return {{"kind", "propagate"}, {"left", r.has_left}, {"right", r.has_right}};
        } else {
          return {{"kind", "product"}, {"blocks", r.blocks}, {"target", r.target.code()}};
        }
      },
      rel);
}

S5Element code_from_json(const json& j) {
  const int c = j.get<int>();
  if (c < 0 || c >= kS5Order) bad("S5 code out of range");
  return S5Element::from_code(c);
}

S5Relation s5_from_json(const json& j) {
  const auto kind = field(j, "kind").get<std::string>();
  if (kind == "pin") {
    return S5Pin{field(j, "copies").get<int>(), code_from_json(field(j, "plus")),
                 code_from_json(field(j, "minus"))};
  }
  if (kind == "propagate") return S5Propagate{field(j, "left").get<bool>(), field(j, "right").get<bool>()};
  if (kind == "product") return S5Product{field(j, "blocks").get<int>(), code_from_json(field(j, "target"))};
  bad("unknown s5 relation \"" + kind + "\"");
}

}  // namespace

json rational_to_json(const Rational& r) {
  return {{"num", big_to_json(numerator(r))}, {"den", big_to_json(denominator(r))}};
}

Rational rational_from_json(const json& j) {
  const BigInt den = big_from_json(field(j, "den"));
  if (den == 0) bad("zero denominator");
  return Rational(big_from_json(field(j, "num")), den);
}

json circuit_to_json(const Circuit& c) {
  switch (c.op()) {
    case Circuit::Op::kConst: return {{"op", "const"}, {"value", c.value()}};
    case Circuit::Op::kVar: return {{"op", "var"}, {"var", c.var_id()}};
    case Circuit::Op::kNot: return {{"op", "not"}, {"arg", circuit_to_json(c.lhs())}};
    case Circuit::Op::kAnd:
    case Circuit::Op::kOr:
    case Circuit::Op::kXor: {
      const char* name = c.op() == Circuit::Op::kAnd ? "and" : c.op() == Circuit::Op::kOr ? "or" : "xor";
      return {{"op", name}, {"args", {circuit_to_json(c.lhs()), circuit_to_json(c.rhs())}}};
    }
  }
  bad("unknown circuit op");
}

Circuit circuit_from_json(const json& j) {
  const auto op = field(j, "op").get<std::string>();
  if (op == "const") return Circuit::constant(field(j, "value").get<bool>());
  if (op == "var") return Circuit::var(field(j, "var").get<int>());
  if (op == "not") return Circuit::negate(circuit_from_json(field(j, "arg")));
  const auto& args = field(j, "args");
  if (!args.is_array() || args.size() != 2) bad("gate \"" + op + "\" needs exactly two args");
  const Circuit l = circuit_from_json(args[0]), r = circuit_from_json(args[1]);
  if (op == "and") return Circuit::land(l, r);
  if (op == "or") return Circuit::lor(l, r);
  if (op == "xor") return Circuit::lxor(l, r);
  bad("unknown circuit op \"" + op + "\"");
}

json bcs_to_json(const Bcs& b) {
  json cs = json::array();
  for (const auto& c : b.constraints) {
    json e = {{"vars", c.scope}};
    if (const auto* t = std::get_if<TableSpec>(&c.spec)) {
      json rows = json::array();
      for (const auto& r : t->rows) rows.push_back(answer_to_json(r));
      e["table"] = rows;
    } else if (const auto* ci = std::get_if<Circuit>(&c.spec)) {
      e["circuit"] = circuit_to_json(*ci);
    } else {
      e["s5"] = s5_to_json(std::get<S5Relation>(c.spec));
    }
    cs.push_back(std::move(e));
  }
  json out = {{"schema_version", kSchemaVersion}, {"n", b.n}, {"c_max", b.c_max}, {"constraints", cs}};
  if (!b.names.empty()) out["names"] = b.names;
  if (!b.groups.empty()) {
    json gs = json::array();
    for (const auto& g : b.groups) gs.push_back({{"name", g.name}, {"vars", g.vars}});
    out["groups"] = gs;
  }
  return out;
}

Bcs bcs_from_json(const json& j) {
  Bcs b;
  try {
    b.n = field(j, "n").get<int>();
    if (j.contains("c_max")) b.c_max = j.at("c_max").get<int>();
    for (const auto& e : field(j, "constraints")) {
      auto scope = field(e, "vars").get<std::vector<int>>();
      if (e.contains("table")) {
        std::vector<LocalAssignment> rows;
        for (const auto& r : e.at("table")) rows.push_back(answer_from_json(r));
        b.constraints.push_back(Constraint::table(std::move(scope), std::move(rows)));
      } else if (e.contains("circuit")) {
        b.constraints.push_back(Constraint::circuit(std::move(scope), circuit_from_json(e.at("circuit"))));
      } else if (e.contains("s5")) {
        b.constraints.push_back(Constraint::s5(std::move(scope), s5_from_json(e.at("s5"))));
      } else {
        bad("constraint needs \"table\", \"circuit\" or \"s5\"");
      }
    }
    if (j.contains("names")) b.names = j.at("names").get<std::vector<std::string>>();
    if (j.contains("groups")) {
      for (const auto& g : j.at("groups")) {
        b.groups.push_back({field(g, "name").get<std::string>(), field(g, "vars").get<std::vector<int>>()});
      }
    }
  } catch (const json::exception& e) {
    bad(e.what());
  }
  b.validate();
  return b;
}

json game_to_json(const NonlocalGame& g) {
  auto questions = [](const std::vector<Question>& qs) {
    json out = json::array();
    for (const auto& q : qs) {
      json e = {{"label", q.label}, {"question_bits", q.question_bits}, {"answer_bits", q.answer_bits}};
      if (q.answers) e["answer_count"] = q.answers->size();
      out.push_back(std::move(e));
    }
    return out;
  };
  json mu = json::array();
  for (const auto& e : g.mu()) mu.push_back({{"x", e.x}, {"y", e.y}, {"p", rational_to_json(e.p)}});
  return {{"schema_version", kSchemaVersion},
          {"name", g.name()},
          {"kind", kind_name(g.kind)},
          {"builder", g.builder},
          {"x", questions(g.x_set())},
          {"y", questions(g.y_set())},
          {"mu", mu}};
}

json transcript_to_json(const Transcript& t) {
  json rounds = json::array();
  for (const auto& r : t.rounds) {
    json e = {{"x", r.x}, {"y", r.y}};
    if (r.declined) {
      e["a"] = nullptr;
      e["b"] = nullptr;
      e["declined"] = true;
    } else {
      e["a"] = answer_to_json(r.a);
      e["b"] = answer_to_json(r.b);
    }
    e["ok"] = r.ok;
    rounds.push_back(std::move(e));
  }
  json out = {{"schema_version", kSchemaVersion},
              {"seed", t.seed},
              {"game", t.game},
              {"rounds", rounds},
              {"accepted", t.accepted},
              {"declines", t.declines},
              {"value", t.value}};
  if (t.exact_value) out["exact_value"] = rational_to_json(*t.exact_value);
  return out;
}

Transcript transcript_from_json(const json& j) {
  Transcript t;
  try {
    t.seed = field(j, "seed").get<std::uint64_t>();
    t.game = field(j, "game").get<std::string>();
    for (const auto& e : field(j, "rounds")) {
      Round r;
      r.x = field(e, "x").get<int>();
      r.y = field(e, "y").get<int>();
      r.declined = e.value("declined", false);
      if (!r.declined) {
        r.a = answer_from_json(field(e, "a"));
        r.b = answer_from_json(field(e, "b"));
      }
      r.ok = field(e, "ok").get<bool>();
      t.rounds.push_back(std::move(r));
    }
    t.accepted = field(j, "accepted").get<std::size_t>();
    t.declines = field(j, "declines").get<std::size_t>();
    t.value = field(j, "value").get<double>();
    if (j.contains("exact_value")) t.exact_value = rational_from_json(j.at("exact_value"));
  } catch (const json::exception& e) {
    bad(e.what());
  }
  return t;
}

}  // namespace zkgame
