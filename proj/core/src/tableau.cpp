#include "zkgame/tableau.hpp"

#include <algorithm>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

Circuit balanced(const std::vector<Circuit>& xs, std::size_t lo, std::size_t hi, bool conj) {
  if (hi - lo == 1) return xs[lo];
  const std::size_t mid = lo + (hi - lo + 1) / 2;
  const auto l = balanced(xs, lo, mid, conj);
  const auto r = balanced(xs, mid, hi, conj);
  return conj ? Circuit::land(l, r) : Circuit::lor(l, r);
}

std::string idx3(const char* head, int a, int b, int c) {
  return std::string(head) + "[" + std::to_string(a) + "][" + std::to_string(b) + "][" +
         std::to_string(c) + "]";
}

}  // namespace

Circuit table_circuit(const Constraint& c) {
  const auto& rows = std::get<TableSpec>(c.spec).rows;
  if (rows.empty()) return Circuit::constant(false);
  if (c.scope.empty()) return Circuit::constant(true);
  std::vector<Circuit> terms;
  for (const auto& row : rows) {
    std::vector<Circuit> lits;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto v = Circuit::var(c.scope[j]);
      lits.push_back(row[j] > 0 ? v : Circuit::negate(v));
    }
    terms.push_back(balanced(lits, 0, lits.size(), true));
  }
  return balanced(terms, 0, terms.size(), false);
}

TableauBcs tableau(const ObliviatedBcs& ob, int ell, S5Element sigma) {
  if (ell < 4) throw Error(Errc::kBadRows, "a tableau needs at least 4 rows");
  if (!sigma.is_five_cycle()) throw Error(Errc::kInvalidArgument, "sigma must be a 5-cycle");
  TableauBcs t;
  t.obl = ob;
  t.ell = ell;
  const Bcs& base = ob.base;
  const int k = ob.k;
  for (const auto& c : base.constraints) {
    if (std::holds_alternative<S5Relation>(c.spec)) {
      throw Error(Errc::kUnsupportedGate, "S5 relations have no branching program");
    }
    const Circuit circ = std::holds_alternative<Circuit>(c.spec) ? std::get<Circuit>(c.spec)
                                                                 : table_circuit(c);
    t.programs.push_back(compile_branching_program(circ, c.scope, sigma));
  }

  Bcs& out = t.bcs;
  int next_var = 0;
  auto add_group = [&](std::string name, int width, GroupInfo info) {
    VarGroup g{std::move(name), {}};
    for (int b = 0; b < width; ++b) {
      g.vars.push_back(next_var++);
      out.names.push_back(width == 1 ? g.name : g.name + "." + std::to_string(b));
    }
    out.groups.push_back(std::move(g));
    t.group_info.push_back(info);
  };
  for (int v = 0; v < base.n; ++v) {
    for (int tt = 1; tt <= k; ++tt) {
      add_group("x[" + std::to_string(v) + "][" + std::to_string(tt) + "]", 1,
                {GroupInfo::kCopy, v, tt, 0});
    }
  }
  for (int i = 0; i < base.m(); ++i) {
    const int d = t.d(i);
    t.cell_base.push_back(static_cast<int>(out.groups.size()));
    for (int p = 1; p <= ell; ++p) {
      for (int q = 1; q <= d; ++q) add_group(idx3("T", i, p, q), kS5Bits, {GroupInfo::kCell, i, p, q});
    }
    t.rand_base.push_back(static_cast<int>(out.groups.size()));
    for (int p = 1; p < ell; ++p) {
      for (int j = 1; j < d; ++j) add_group(idx3("r", i, p, j), kS5Bits, {GroupInfo::kRandomizer, i, p, j});
    }
  }
  out.n = next_var;

  auto bits = [&](int group, std::vector<int>& scope) {
    const auto& vars = out.groups[group].vars;
    scope.insert(scope.end(), vars.begin(), vars.end());
  };
  for (int i = 0; i < base.m(); ++i) {
    const auto& prog = t.programs[i];
    const int d = t.d(i);
    for (int q = 1; q <= d; ++q) {
      const auto& ins = prog.instructions[q - 1];
      std::vector<int> scope;
      for (int tt = 1; tt <= k; ++tt) scope.push_back(ob.copy_var(ins.var, tt));
      bits(t.cell_group(i, 1, q), scope);
      out.constraints.push_back(Constraint::s5(std::move(scope), S5Pin{k, ins.on_plus, ins.on_minus}));
      t.clauses.push_back({ClauseKind::kPin, i, 1, q});
    }
    for (int p = 1; p < ell; ++p) {
      for (int q = 1; q <= d; ++q) {
        std::vector<int> scope;
        const int left = t.randomizer_group(i, p, q - 1);
        const int right = t.randomizer_group(i, p, q);
        if (left >= 0) bits(left, scope);
        bits(t.cell_group(i, p, q), scope);
        if (right >= 0) bits(right, scope);
        bits(t.cell_group(i, p + 1, q), scope);
        out.constraints.push_back(Constraint::s5(std::move(scope), S5Propagate{left >= 0, right >= 0}));
        t.clauses.push_back({ClauseKind::kPropagate, i, p, q});
      }
    }
    std::vector<int> scope;
    for (int q = 1; q <= d; ++q) bits(t.cell_group(i, ell, q), scope);
    out.constraints.push_back(Constraint::s5(std::move(scope), S5Product{d, prog.sigma}));
    t.clauses.push_back({ClauseKind::kProduct, i, ell, 0});
  }
  out.c_max = 0;
  for (const auto& c : out.constraints) out.c_max = std::max<int>(out.c_max, static_cast<int>(c.scope.size()));
  return t;
}

TableauBcs tableau(const Bcs& b, int ell, S5Element sigma) { return tableau(obliviate(b, 1), ell, sigma); }

TableauBcs pzk_transform(const Bcs& b, int ell, int k) {
  if (ell < 4) throw Error(Errc::kBadRows, "a tableau needs at least 4 rows");
  if (k < 5) throw Error(Errc::kBadParams, "obliviation degree must be at least 5");
  auto t = tableau(obliviate(b, k), ell);
  if (ell < 8 || k < 9) {
    t.warnings.push_back("parameters below (l,k) = (8,9): oracularized zero knowledge is not covered");
  }
  return t;
}

void complete_cells(const TableauBcs& t, TableauLatent& latent) {
  const auto psi = induced_assignment(t.obl, latent.copies);
  latent.cells.assign(t.m(), {});
  for (int i = 0; i < t.m(); ++i) {
    const int d = t.d(i);
    const auto& prog = t.programs[i];
    const auto& r = latent.randomizers[i];
    auto rand = [&](int p, int j) {
      return (j <= 0 || j >= d) ? S5Element() : r[(p - 1) * (d - 1) + (j - 1)];
    };
    auto& cells = latent.cells[i];
    cells.resize(static_cast<std::size_t>(t.ell) * d);
    for (int q = 1; q <= d; ++q) {
      const auto& ins = prog.instructions[q - 1];
      cells[q - 1] = psi[ins.var] > 0 ? ins.on_plus : ins.on_minus;
    }
    for (int p = 1; p < t.ell; ++p) {
      for (int q = 1; q <= d; ++q) {
        cells[p * d + (q - 1)] = rand(p, q - 1).inverse() * cells[(p - 1) * d + (q - 1)] * rand(p, q);
      }
    }
  }
}

void check_witness(const Bcs& base, const std::vector<Sign>& w) {
  if (static_cast<int>(w.size()) != base.n) throw Error(Errc::kNotAWitness, "witness width differs");
  for (const auto& c : base.constraints) {
    LocalAssignment local;
    for (int v : c.scope) local.push_back(w[v]);
    if (!eval_local(c, local)) throw Error(Errc::kNotAWitness, "witness violates a constraint");
  }
}

TableauLatent sample_latent(const TableauBcs& t, const std::vector<Sign>& w, Rng& rng) {
  const Bcs& base = t.obl.base;
  check_witness(base, w);
  TableauLatent latent;
  const int k = t.k();
  latent.copies.resize(static_cast<std::size_t>(base.n) * k);
  for (int v = 0; v < base.n; ++v) {
    int p = 1;
    for (int tt = 1; tt < k; ++tt) {
      const Sign s = rng.coin() ? 1 : -1;
      latent.copies[t.obl.copy_var(v, tt)] = s;
      p *= s;
    }
    latent.copies[t.obl.copy_var(v, k)] = static_cast<Sign>(p * w[v]);
  }
  latent.randomizers.resize(t.m());
  for (int i = 0; i < t.m(); ++i) {
    const int d = t.d(i);
    latent.randomizers[i].resize(static_cast<std::size_t>(t.ell - 1) * std::max(d - 1, 0));
    for (auto& g : latent.randomizers[i]) g = S5Element::from_code(static_cast<int>(rng.below(kS5Order)));
  }
  complete_cells(t, latent);
  return latent;
}

std::vector<Sign> latent_group_bits(const TableauBcs& t, const TableauLatent& latent, int group) {
  const auto& info = t.group_info[group];
  switch (info.kind) {
    case GroupInfo::kCopy: return {latent.copies[t.obl.copy_var(info.a, info.b)]};
    case GroupInfo::kCell: {
      const auto g = latent.cells[info.a][(info.b - 1) * t.d(info.a) + (info.c - 1)];
      const auto e = encode7(g);
      return {e.begin(), e.end()};
    }
    case GroupInfo::kRandomizer: {
      const auto g = latent.randomizers[info.a][(info.b - 1) * (t.d(info.a) - 1) + (info.c - 1)];
      const auto e = encode7(g);
      return {e.begin(), e.end()};
    }
  }
  return {};
}

std::vector<Sign> latent_bits(const TableauBcs& t, const TableauLatent& latent) {
  std::vector<Sign> out(t.bcs.n, 1);
  for (std::size_t g = 0; g < t.bcs.groups.size(); ++g) {
    const auto b = latent_group_bits(t, latent, static_cast<int>(g));
    const auto& vars = t.bcs.groups[g].vars;
    for (std::size_t j = 0; j < vars.size(); ++j) out[vars[j]] = b[j];
  }
  return out;
}

}  // namespace zkgame
