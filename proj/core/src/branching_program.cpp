#include "zkgame/branching_program.hpp"

#include <algorithm>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

class Compiler {
 public:
  explicit Compiler(int pad_var) : pad_var_(pad_var) {
    const auto a = S5Element::standard_cycle();
    alpha_ = a;
    beta_ = commutator_partner(a);
    gamma_ = alpha_ * beta_ * alpha_.inverse() * beta_.inverse();
  }

  // Program of exactly 4^depth instructions yielding tau when c holds.
  std::vector<Instruction> build(const Circuit& c, S5Element tau, int depth) {
    std::vector<Instruction> out;
    switch (c.op()) {
      case Circuit::Op::kConst:
        out.push_back({pad_var_, c.value() ? tau : S5Element(), c.value() ? tau : S5Element()});
        break;
      case Circuit::Op::kVar:
        out.push_back({c.var_id(), tau, S5Element()});
        break;
      case Circuit::Op::kNot: {
        out = build(c.lhs(), tau.inverse(), depth);
        out.back().on_plus = out.back().on_plus * tau;
        out.back().on_minus = out.back().on_minus * tau;
        return out;
      }
      case Circuit::Op::kOr: {
        const auto n = Circuit::negate(Circuit::land(Circuit::negate(c.lhs()), Circuit::negate(c.rhs())));
        return build(n, tau, depth);
      }
      case Circuit::Op::kAnd: {
        const auto g = conjugator(gamma_, tau);
        const auto a = g * alpha_ * g.inverse();
        const auto b = g * beta_ * g.inverse();
        for (auto [sub, target] : {std::pair{c.lhs(), a}, std::pair{c.rhs(), b},
                                   std::pair{c.lhs(), a.inverse()}, std::pair{c.rhs(), b.inverse()}}) {
          auto part = build(sub, target, depth - 1);
          out.insert(out.end(), part.begin(), part.end());
        }
        return out;
      }
      case Circuit::Op::kXor:
        throw Error(Errc::kUnsupportedGate, "XOR gates are not compiled; rewrite with AND/OR/NOT");
    }
    pad(out, depth);
    return out;
  }

 private:
  void pad(std::vector<Instruction>& prog, int depth) const {
    std::size_t len = 1;
    for (int i = 0; i < depth; ++i) len *= 4;
    while (prog.size() < len) prog.push_back({pad_var_, S5Element(), S5Element()});
  }

  int pad_var_;
  S5Element alpha_, beta_, gamma_;
};

}  // namespace

PermutationBranchingProgram compile_branching_program(const Circuit& c, const std::vector<int>& scope,
                                                      S5Element sigma) {
  if (!sigma.is_five_cycle()) throw Error(Errc::kInvalidArgument, "sigma must be a 5-cycle");
  for (int v : c.vars()) {
    if (std::find(scope.begin(), scope.end(), v) == scope.end()) {
      throw Error(Errc::kInvalidArgument, "circuit variable outside scope");
    }
  }
  if (scope.empty()) {
    throw Error(Errc::kUnsupportedGate, "constant over an empty scope has no variable to read");
  }
  Compiler comp(scope.front());
  PermutationBranchingProgram p;
  p.vars = scope;
  p.sigma = sigma;
  p.instructions = comp.build(c, sigma, c.depth());
  return p;
}

PermutationBranchingProgram compile_branching_program(const Constraint& c, S5Element sigma) {
  const auto* circ = std::get_if<Circuit>(&c.spec);
  if (!circ) throw Error(Errc::kUnsupportedGate, "only circuit constraints compile to programs");
  return compile_branching_program(*circ, c.scope, sigma);
}

S5Element run_pbp(const PermutationBranchingProgram& p, const Assignment& a) {
  S5Element acc;
  for (const auto& ins : p.instructions) {
    const auto it = a.find(ins.var);
    if (it == a.end()) {
      throw Error(Errc::kMissingVariable, "no value for variable " + std::to_string(ins.var));
    }
    acc = acc * (it->second > 0 ? ins.on_plus : ins.on_minus);
  }
  return acc;
}

S5Element run_pbp_local(const PermutationBranchingProgram& p, std::span<const Sign> values) {
  if (values.size() != p.vars.size()) {
    throw Error(Errc::kMissingVariable, "assignment width differs from program scope");
  }
  S5Element acc;
  for (const auto& ins : p.instructions) {
    const auto pos = std::find(p.vars.begin(), p.vars.end(), ins.var) - p.vars.begin();
    acc = acc * (values[pos] > 0 ? ins.on_plus : ins.on_minus);
  }
  return acc;
}

bool recognizes(const PermutationBranchingProgram& p, const Constraint& c) {
  const int s = static_cast<int>(c.scope.size());
  if (s > kRecognizeGuard) throw Error(Errc::kScopeTooLarge, "scope too large for exhaustive check");
  LocalAssignment values(s);
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << s); ++idx) {
    Assignment a;
    for (int j = 0; j < s; ++j) {
      values[j] = ((idx >> j) & 1) ? 1 : -1;
      a[c.scope[j]] = values[j];
    }
    const S5Element out = run_pbp(p, a);
    if (out != (eval_local(c, values) ? p.sigma : S5Element())) return false;
  }
  return true;
}

}  // namespace zkgame
