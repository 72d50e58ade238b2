#pragma once

// A small smooth expression language over named chart coordinates.
//
//   expr    := term   (('+' | '-') term)*
//   term    := unary  (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?            (right associative)
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Functions: sin cos tan exp log sqrt sinh cosh tanh. Constants: pi e.
// `abs` is rejected (not smooth). A power whose exponent is a constant
// integer is evaluated by repeated multiplication; any other power is
// exp(b * log(a)) and requires a > 0.

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finslerlab/errors.hpp"
#include "finslerlab/jet.hpp"

namespace finslerlab {

enum class Func : std::uint8_t { sin, cos, tan, exp, log, sqrt, sinh, cosh, tanh };

std::string_view function_name(Func f);

struct ExprNode {
  enum class Kind : std::uint8_t {
    number,
    constant,  // index 0 = pi, 1 = e
    variable,  // index into the coordinate list
    negate,
    add,
    subtract,
    multiply,
    divide,
    power,
    call,
  };

  Kind kind = Kind::number;
  double number = 0.0;
  int index = 0;
  Func func = Func::sin;
  int lhs = -1;  // operand for negate / call
  int rhs = -1;

  // Filled in when the field is built: power nodes with a constant integral exponent.
  bool integer_exponent = false;
  int exponent = 0;
};

class ScalarField {
 public:
  /// Parse `source`; every identifier must be a coordinate, a constant or a function.
  static ScalarField parse(std::string_view source, std::vector<std::string> coordinates);

  /// Build from an explicit node arena (children must precede parents).
  ScalarField(std::vector<ExprNode> nodes, int root, std::vector<std::string> coordinates);

  template <class T>
  T evaluate(std::span<const T> values) const;

  template <class T>
  T evaluate(const std::map<std::string, T>& assignment) const;

  std::set<std::string> free_variables() const;
  bool is_constant() const { return free_variables().empty(); }

  /// Fully parenthesised text that parses back to a structurally equal tree.
  std::string print() const;
  const std::string& source() const { return impl_->source; }
  const std::vector<std::string>& coordinates() const { return impl_->coordinates; }

  std::span<const ExprNode> nodes() const { return impl_->nodes; }
  int root() const { return impl_->root; }

  bool structurally_equal(const ScalarField& other) const;

 private:
  struct Impl {
    std::vector<ExprNode> nodes;
    int root = -1;
    std::string source;
    std::vector<std::string> coordinates;
  };

  explicit ScalarField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  template <class T>
  T eval_node(int id, std::span<const T> values) const;

  [[noreturn]] void domain_failure(int id, const std::string& what, double value) const;

  std::string print_node(int id) const;

  std::shared_ptr<const Impl> impl_;
};

/// Checks coordinate names: nonempty list, identifier syntax, distinct, not reserved.
void validate_coordinate_names(const std::vector<std::string>& coordinates);

template <class T>
T ScalarField::evaluate(std::span<const T> values) const {
  if (values.size() < impl_->coordinates.size()) {
    throw std::invalid_argument("expression needs " + std::to_string(impl_->coordinates.size()) +
                                " coordinate values, got " + std::to_string(values.size()));
  }
  return eval_node<T>(impl_->root, values);
}

template <class T>
T ScalarField::evaluate(const std::map<std::string, T>& assignment) const {
  std::vector<T> values(impl_->coordinates.size(), T(0.0));
  const auto used = free_variables();
  for (std::size_t i = 0; i < impl_->coordinates.size(); ++i) {
    const auto it = assignment.find(impl_->coordinates[i]);
    if (it != assignment.end()) {
      values[i] = it->second;
    } else if (used.contains(impl_->coordinates[i])) {
      throw std::invalid_argument("no value assigned to coordinate '" + impl_->coordinates[i] + "'");
    }
  }
  return evaluate<T>(std::span<const T>(values));
}

template <class T>
T ScalarField::eval_node(int id, std::span<const T> values) const {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tan;
  using std::tanh;
  using Kind = ExprNode::Kind;

  const ExprNode& node = impl_->nodes[static_cast<std::size_t>(id)];
  switch (node.kind) {
    case Kind::number:
      return T(node.number);
    case Kind::constant:
      return T(node.index == 0 ? std::numbers::pi : std::numbers::e);
    case Kind::variable:
      return values[static_cast<std::size_t>(node.index)];
    case Kind::negate:
      return -eval_node<T>(node.lhs, values);
    case Kind::add:
      return eval_node<T>(node.lhs, values) + eval_node<T>(node.rhs, values);
    case Kind::subtract:
      return eval_node<T>(node.lhs, values) - eval_node<T>(node.rhs, values);
    case Kind::multiply:
      return eval_node<T>(node.lhs, values) * eval_node<T>(node.rhs, values);
    case Kind::divide: {
      T num = eval_node<T>(node.lhs, values);
      T den = eval_node<T>(node.rhs, values);
      if (primal(den) == 0.0) domain_failure(id, "division by zero", 0.0);
      return num / den;
    }
    case Kind::power: {
      T base = eval_node<T>(node.lhs, values);
      if (node.integer_exponent) {
        if (node.exponent < 0 && primal(base) == 0.0) domain_failure(id, "zero raised to a negative power", 0.0);
        return ipow(base, node.exponent);
      }
      if (!(primal(base) > 0.0)) domain_failure(id, "non-integer power of a non-positive base", primal(base));
      T ex = eval_node<T>(node.rhs, values);
      return exp(ex * log(base));
    }
    case Kind::call: {
      T arg = eval_node<T>(node.lhs, values);
      switch (node.func) {
        case Func::sin:
          return sin(arg);
        case Func::cos:
          return cos(arg);
        case Func::tan:
          return tan(arg);
        case Func::exp:
          return exp(arg);
        case Func::log:
          if (!(primal(arg) > 0.0)) domain_failure(id, "log of a non-positive value", primal(arg));
          return log(arg);
        case Func::sqrt:
          if (!(primal(arg) > 0.0)) domain_failure(id, "sqrt of a non-positive value", primal(arg));
          return sqrt(arg);
        case Func::sinh:
          return sinh(arg);
        case Func::cosh:
          return cosh(arg);
        case Func::tanh:
          return tanh(arg);
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace finslerlab
