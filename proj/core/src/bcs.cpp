#include "zkgame/bcs.hpp"

#include <algorithm>
#include <set>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

std::optional<S5Element> block_at(std::span<const Sign> values, std::size_t offset) {
  return decode7(values.subspan(offset, kS5Bits));
}

bool eval_s5(const S5Relation& rel, std::span<const Sign> v) {
  if (const auto* pin = std::get_if<S5Pin>(&rel)) {
    int product = 1;
    for (int t = 0; t < pin->copies; ++t) product *= v[t];
    const auto cell = block_at(v, pin->copies);
    return cell && *cell == (product > 0 ? pin->plus : pin->minus);
  }
  if (const auto* prop = std::get_if<S5Propagate>(&rel)) {
    std::size_t at = 0;
    S5Element left, right;
    if (prop->has_left) {
      const auto g = block_at(v, at);
      if (!g) return false;
      left = *g;
      at += kS5Bits;
    }
    const auto cell = block_at(v, at);
    if (!cell) return false;
    at += kS5Bits;
    if (prop->has_right) {
      const auto g = block_at(v, at);
      if (!g) return false;
      right = *g;
      at += kS5Bits;
    }
    const auto next = block_at(v, at);
    return next && *next == left.inverse() * *cell * right;
  }
  const auto& prod = std::get<S5Product>(rel);
  S5Element acc;
  for (int q = 0; q < prod.blocks; ++q) {
    const auto g = block_at(v, static_cast<std::size_t>(q) * kS5Bits);
    if (!g) return false;
    acc = acc * *g;
  }
  return acc == prod.target;
}

std::size_t s5_scope_size(const S5Relation& rel) {
  if (const auto* pin = std::get_if<S5Pin>(&rel)) return pin->copies + kS5Bits;
  if (const auto* prop = std::get_if<S5Propagate>(&rel)) {
    return kS5Bits * (2 + prop->has_left + prop->has_right);
  }
  return static_cast<std::size_t>(std::get<S5Product>(rel).blocks) * kS5Bits;
}

}  // namespace

Constraint Constraint::table(std::vector<int> scope, std::vector<LocalAssignment> rows) {
  return Constraint{std::move(scope), TableSpec{std::move(rows)}};
}

Constraint Constraint::circuit(std::vector<int> scope, Circuit c) {
  return Constraint{std::move(scope), std::move(c)};
}

Constraint Constraint::s5(std::vector<int> scope, S5Relation rel) {
  return Constraint{std::move(scope), rel};
}

void Bcs::validate() const {
  auto fail = [](const std::string& msg) { throw Error(Errc::kInvalidArgument, msg); };
  if (n < 0) fail("negative variable count");
  if (constraints.empty()) fail("a BCS needs at least one constraint");
  if (!names.empty()) {
    if (static_cast<int>(names.size()) != n) fail("names must cover every variable");
    std::set<std::string> seen;
    for (const auto& s : names) {
      if (!s.empty() && !seen.insert(s).second) fail("duplicate variable name " + s);
    }
  }
  if (!groups.empty()) {
    std::vector<int> owner(n, -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (int v : groups[g].vars) {
        if (v < 0 || v >= n) fail("group variable out of range");
        if (owner[v] >= 0) fail("variable in two groups");
        owner[v] = static_cast<int>(g);
      }
    }
    if (std::count(owner.begin(), owner.end(), -1) != 0) fail("groups must cover every variable");
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    const std::string where = "constraint " + std::to_string(i) + ": ";
    std::set<int> seen;
    for (int v : c.scope) {
      if (v < 0 || v >= n) fail(where + "scope variable out of range");
      if (!seen.insert(v).second) fail(where + "repeated scope variable");
    }
    if (static_cast<int>(c.scope.size()) > c_max) {
      throw Error(Errc::kScopeTooLarge, where + "scope exceeds C_max");
    }
    if (const auto* t = std::get_if<TableSpec>(&c.spec)) {
      for (const auto& row : t->rows) {
        if (row.size() != c.scope.size()) fail(where + "table row width differs from scope");
        for (Sign s : row) {
          if (s != 1 && s != -1) fail(where + "table entries must be +1/-1");
        }
      }
    } else if (const auto* circ = std::get_if<Circuit>(&c.spec)) {
      for (int v : circ->vars()) {
        if (!seen.count(v)) fail(where + "circuit leaf outside scope");
      }
    } else {
      if (s5_scope_size(std::get<S5Relation>(c.spec)) != c.scope.size()) {
        fail(where + "S5 relation does not match scope width");
      }
    }
  }
}

std::vector<VarGroup> effective_groups(const Bcs& b) {
  if (!b.groups.empty()) return b.groups;
  std::vector<VarGroup> out(b.n);
  for (int v = 0; v < b.n; ++v) out[v] = VarGroup{var_name(b, v), {v}};
  return out;
}

std::vector<int> group_index(const Bcs& b) {
  std::vector<int> out(b.n);
  if (b.groups.empty()) {
    for (int v = 0; v < b.n; ++v) out[v] = v;
    return out;
  }
  for (std::size_t g = 0; g < b.groups.size(); ++g) {
    for (int v : b.groups[g].vars) out[v] = static_cast<int>(g);
  }
  return out;
}

std::string var_name(const Bcs& b, int v) {
  if (!b.names.empty() && !b.names[v].empty()) return b.names[v];
  return "v" + std::to_string(v);
}

bool eval_local(const Constraint& c, std::span<const Sign> values) {
  if (values.size() != c.scope.size()) {
    throw Error(Errc::kMissingVariable, "assignment width differs from scope");
  }
  if (const auto* t = std::get_if<TableSpec>(&c.spec)) {
    return std::any_of(t->rows.begin(), t->rows.end(), [&](const LocalAssignment& row) {
      return std::equal(row.begin(), row.end(), values.begin());
    });
  }
  if (const auto* circ = std::get_if<Circuit>(&c.spec)) {
    return circ->eval([&](int v) -> Sign {
      const auto it = std::find(c.scope.begin(), c.scope.end(), v);
      return values[it - c.scope.begin()];
    });
  }
  return eval_s5(std::get<S5Relation>(c.spec), values);
}

LocalAssignment restrict_to(const Assignment& a, const std::vector<int>& scope) {
  LocalAssignment out;
  out.reserve(scope.size());
  for (int v : scope) {
    const auto it = a.find(v);
    if (it == a.end()) {
      throw Error(Errc::kMissingVariable, "no value for variable " + std::to_string(v));
    }
    out.push_back(it->second);
  }
  return out;
}

bool eval_constraint(const Constraint& c, const Assignment& a) {
  return eval_local(c, restrict_to(a, c.scope));
}

std::vector<LocalAssignment> satisfying_set(const Constraint& c, int guard) {
  const int s = static_cast<int>(c.scope.size());
  if (s > guard) {
    throw Error(Errc::kScopeTooLarge,
                "scope of " + std::to_string(s) + " exceeds the enumeration guard");
  }
  std::vector<LocalAssignment> out;
  LocalAssignment values(s);
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << s); ++idx) {
    for (int j = 0; j < s; ++j) values[j] = ((idx >> j) & 1) ? 1 : -1;
    if (eval_local(c, values)) out.push_back(values);
  }
  return out;
}

std::optional<Assignment> brute_force_satisfiable(const Bcs& b, int guard) {
  if (b.n > guard) {
    throw Error(Errc::kTooLarge, std::to_string(b.n) + " variables exceed the brute-force guard");
  }
  // Each constraint is checked once its last scope variable is assigned.
  std::vector<std::vector<int>> due(b.n + 1);
  for (int i = 0; i < b.m(); ++i) {
    const auto& scope = b.constraints[i].scope;
    const int last = scope.empty() ? -1 : *std::max_element(scope.begin(), scope.end());
    due[last + 1].push_back(i);
  }
  std::vector<Sign> values(b.n, 1);
  auto ok_at = [&](int slot) {
    for (int i : due[slot]) {
      const auto& c = b.constraints[i];
      LocalAssignment local;
      local.reserve(c.scope.size());
      for (int v : c.scope) local.push_back(values[v]);
      if (!eval_local(c, local)) return false;
    }
    return true;
  };
  if (!ok_at(0)) return std::nullopt;
  // Iterative DFS; choice[v] counts values tried at v.
  std::vector<int> choice(b.n, 0);
  int v = 0;
  while (v >= 0) {
    if (v == b.n) {
      Assignment a;
      for (int u = 0; u < b.n; ++u) a[u] = values[u];
      return a;
    }
    if (choice[v] == 2) {
      choice[v] = 0;
      --v;
      continue;
    }
    values[v] = choice[v] == 0 ? 1 : -1;
    ++choice[v];
    if (ok_at(v + 1)) ++v;
  }
  return std::nullopt;
}

Constraint parity_constraint(std::vector<int> scope, Sign product) {
  const int s = static_cast<int>(scope.size());
  std::vector<LocalAssignment> rows;
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << s); ++idx) {
    LocalAssignment row(s);
    int p = 1;
    for (int j = 0; j < s; ++j) {
      row[j] = ((idx >> j) & 1) ? 1 : -1;
      p *= row[j];
    }
    if (p == product) rows.push_back(std::move(row));
  }
  return Constraint::table(std::move(scope), std::move(rows));
}

Bcs magic_square() {
  Bcs b;
  b.n = 9;
  b.c_max = 3;
  for (int v = 0; v < 9; ++v) b.names.push_back("v" + std::to_string(v + 1));
  for (int r = 0; r < 3; ++r) b.constraints.push_back(parity_constraint({3 * r, 3 * r + 1, 3 * r + 2}, 1));
  for (int c = 0; c < 3; ++c) {
    b.constraints.push_back(parity_constraint({c, c + 3, c + 6}, c == 2 ? -1 : 1));
  }
  return b;
}

}  // namespace zkgame
