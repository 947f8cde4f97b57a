#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>

namespace zkgame {

// Fan-in-2 boolean circuit over signed variables (+1 = true). Nodes are
// immutable and shared, so sub-circuits can be reused freely.
class Circuit {
 public:
  enum class Op { kConst, kVar, kNot, kAnd, kOr, kXor };

  static Circuit constant(bool value);
  static Circuit var(int id);
  static Circuit negate(const Circuit& c);
  static Circuit land(const Circuit& a, const Circuit& b);
  static Circuit lor(const Circuit& a, const Circuit& b);
  static Circuit lxor(const Circuit& a, const Circuit& b);

  Op op() const { return node_->op; }
  bool value() const { return node_->value; }
  int var_id() const { return node_->var; }
  Circuit lhs() const { return Circuit(node_->lhs); }
  Circuit rhs() const { return Circuit(node_->rhs); }

  // `lookup` returns the sign of a variable id.
  bool eval(const std::function<std::int8_t(int)>& lookup) const;
  // Gate depth: AND/OR/XOR count one level, NOT and leaves count zero.
  int depth() const;
  std::set<int> vars() const;
  // Applies f to every variable id.
  Circuit relabel(const std::function<int(int)>& f) const;
  std::string to_string() const;

 private:
  struct Node {
    Op op = Op::kConst;
    bool value = false;
    int var = -1;
    std::shared_ptr<const Node> lhs, rhs;
  };
  explicit Circuit(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Circuit make(Op op, bool value, int var, const Circuit* a, const Circuit* b);

  std::shared_ptr<const Node> node_;
};

}  // namespace zkgame
