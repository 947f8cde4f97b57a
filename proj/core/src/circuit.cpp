#include "zkgame/circuit.hpp"

#include <algorithm>

#include "zkgame/error.hpp"

namespace zkgame {

Circuit Circuit::make(Op op, bool value, int var, const Circuit* a, const Circuit* b) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->value = value;
  node->var = var;
  if (a) node->lhs = a->node_;
  if (b) node->rhs = b->node_;
  return Circuit(std::move(node));
}

Circuit Circuit::constant(bool value) { return make(Op::kConst, value, -1, nullptr, nullptr); }

Circuit Circuit::var(int id) {
  if (id < 0) throw Error(Errc::kInvalidArgument, "negative variable id");
  return make(Op::kVar, false, id, nullptr, nullptr);
}

Circuit Circuit::negate(const Circuit& c) { return make(Op::kNot, false, -1, &c, nullptr); }
Circuit Circuit::land(const Circuit& a, const Circuit& b) { return make(Op::kAnd, false, -1, &a, &b); }
Circuit Circuit::lor(const Circuit& a, const Circuit& b) { return make(Op::kOr, false, -1, &a, &b); }
Circuit Circuit::lxor(const Circuit& a, const Circuit& b) { return make(Op::kXor, false, -1, &a, &b); }

bool Circuit::eval(const std::function<std::int8_t(int)>& lookup) const {
  switch (op()) {
    case Op::kConst: return value();
    case Op::kVar: return lookup(var_id()) > 0;
    case Op::kNot: return !lhs().eval(lookup);
    case Op::kAnd: return lhs().eval(lookup) && rhs().eval(lookup);
    case Op::kOr: return lhs().eval(lookup) || rhs().eval(lookup);
    case Op::kXor: return lhs().eval(lookup) != rhs().eval(lookup);
  }
  return false;
}

int Circuit::depth() const {
  switch (op()) {
    case Op::kConst:
    case Op::kVar: return 0;
    case Op::kNot: return lhs().depth();
    default: return 1 + std::max(lhs().depth(), rhs().depth());
  }
}

std::set<int> Circuit::vars() const {
  std::set<int> out;
  std::function<void(const Circuit&)> walk = [&](const Circuit& c) {
    switch (c.op()) {
      case Op::kConst: return;
      case Op::kVar: out.insert(c.var_id()); return;
      case Op::kNot: walk(c.lhs()); return;
      default: walk(c.lhs()); walk(c.rhs()); return;
    }
  };
  walk(*this);
  return out;
}

Circuit Circuit::relabel(const std::function<int(int)>& f) const {
  switch (op()) {
    case Op::kConst: return *this;
    case Op::kVar: return var(f(var_id()));
    case Op::kNot: return negate(lhs().relabel(f));
    case Op::kAnd: return land(lhs().relabel(f), rhs().relabel(f));
    case Op::kOr: return lor(lhs().relabel(f), rhs().relabel(f));
    case Op::kXor: return lxor(lhs().relabel(f), rhs().relabel(f));
  }
  return *this;
}

std::string Circuit::to_string() const {
  switch (op()) {
    case Op::kConst: return value() ? "1" : "0";
    case Op::kVar: return "x" + std::to_string(var_id());
    case Op::kNot: return "!" + lhs().to_string();
    case Op::kAnd: return "(" + lhs().to_string() + " & " + rhs().to_string() + ")";
    case Op::kOr: return "(" + lhs().to_string() + " | " + rhs().to_string() + ")";
    case Op::kXor: return "(" + lhs().to_string() + " ^ " + rhs().to_string() + ")";
  }
  return "?";
}

}  // namespace zkgame
