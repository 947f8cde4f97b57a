#include "zkgame/obliviation.hpp"

#include <functional>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

// Sign product of the copies as a circuit: XNOR chain written with
// AND/OR/NOT only.
Circuit product_circuit(int first, int k) {
  Circuit acc = Circuit::var(first);
  for (int t = 1; t < k; ++t) {
    const Circuit x = Circuit::var(first + t);
    acc = Circuit::lor(Circuit::land(acc, x), Circuit::land(Circuit::negate(acc), Circuit::negate(x)));
  }
  return acc;
}

}  // namespace

ObliviatedBcs obliviate(const Bcs& b, int k) {
  if (k < 1) throw Error(Errc::kBadParams, "obliviation degree must be at least 1");
  b.validate();
  ObliviatedBcs ob;
  ob.base = b;
  ob.k = k;
  Bcs& flat = ob.flat;
  flat.n = b.n * k;
  flat.c_max = b.c_max * k;
  for (int v = 0; v < b.n; ++v) {
    for (int t = 1; t <= k; ++t) {
      flat.names.push_back("x[" + std::to_string(v) + "][" + std::to_string(t) + "]");
    }
  }
  for (std::size_t i = 0; i < b.constraints.size(); ++i) {
    const auto& c = b.constraints[i];
    std::vector<int> scope;
    for (int v : c.scope) {
      for (int t = 1; t <= k; ++t) scope.push_back(ob.copy_var(v, t));
    }
    if (const auto* circ = std::get_if<Circuit>(&c.spec)) {
      std::function<Circuit(const Circuit&)> sub = [&](const Circuit& n) -> Circuit {
        switch (n.op()) {
          case Circuit::Op::kConst: return n;
          case Circuit::Op::kVar: return product_circuit(ob.copy_var(n.var_id(), 1), k);
          case Circuit::Op::kNot: return Circuit::negate(sub(n.lhs()));
          case Circuit::Op::kAnd: return Circuit::land(sub(n.lhs()), sub(n.rhs()));
          case Circuit::Op::kOr: return Circuit::lor(sub(n.lhs()), sub(n.rhs()));
          case Circuit::Op::kXor: return Circuit::lxor(sub(n.lhs()), sub(n.rhs()));
        }
        return n;
      };
      flat.constraints.push_back(Constraint::circuit(std::move(scope), sub(*circ)));
    } else if (std::holds_alternative<TableSpec>(c.spec)) {
      const int width = static_cast<int>(scope.size());
      if (width > kSatisfyingSetGuard) {
        throw Error(Errc::kScopeTooLarge, "constraint " + std::to_string(i) + " expands to " +
                                              std::to_string(width) + " copies");
      }
      std::vector<LocalAssignment> rows;
      LocalAssignment phi(width), psi(c.scope.size());
      for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << width); ++idx) {
        for (int j = 0; j < width; ++j) phi[j] = ((idx >> j) & 1) ? 1 : -1;
        for (std::size_t u = 0; u < c.scope.size(); ++u) {
          int p = 1;
          for (int t = 0; t < k; ++t) p *= phi[u * k + t];
          psi[u] = static_cast<Sign>(p);
        }
        if (eval_local(c, psi)) rows.push_back(phi);
      }
      flat.constraints.push_back(Constraint::table(std::move(scope), std::move(rows)));
    } else {
      throw Error(Errc::kInvalidArgument, "S5 relations cannot be obliviated");
    }
  }
  return ob;
}

std::vector<Sign> induced_assignment(const ObliviatedBcs& ob, const std::vector<Sign>& copies) {
  std::vector<Sign> psi(ob.base.n, 1);
  for (int v = 0; v < ob.base.n; ++v) {
    int p = 1;
    for (int t = 1; t <= ob.k; ++t) p *= copies.at(ob.copy_var(v, t));
    psi[v] = static_cast<Sign>(p);
  }
  return psi;
}

}  // namespace zkgame
