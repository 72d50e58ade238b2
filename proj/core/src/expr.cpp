#include "finslerlab/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <optional>
#include <utility>

namespace finslerlab {
namespace {

constexpr std::array<std::pair<std::string_view, Func>, 9> kFunctions = {{
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"tan", Func::tan},
    {"exp", Func::exp},
    {"log", Func::log},
    {"sqrt", Func::sqrt},
    {"sinh", Func::sinh},
    {"cosh", Func::cosh},
    {"tanh", Func::tanh},
}};

std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions) {
    if (n == name) return f;
  }
  return std::nullopt;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

bool is_reserved(std::string_view s) {
  return s == "pi" || s == "e" || s == "abs" || lookup_function(s).has_value();
}

struct Token {
  enum class Kind { number, name, op, end };
  Kind kind = Kind::end;
  std::string_view text;
  double number = 0.0;
  std::size_t offset = 0;
};

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& coords) : src_(src), coords_(coords) { advance(); }

  std::vector<ExprNode> take_nodes() { return std::move(nodes_); }

  int parse_all() {
    const int root = parse_expr();
    if (tok_.kind != Token::Kind::end) fail("unexpected '" + std::string(tok_.text) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.offset); }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::end;
      tok_.text = "end of input";
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) ++end;
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t exp_end = end + 1;
        if (exp_end < src_.size() && (src_[exp_end] == '+' || src_[exp_end] == '-')) ++exp_end;
        if (exp_end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp_end]))) {
          while (exp_end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp_end]))) ++exp_end;
          end = exp_end;
        }
      }
      const char* first = src_.data() + pos_;
      const char* last = src_.data() + end;
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last) fail("malformed number '" + std::string(first, last) + "'");
      tok_.kind = Token::Kind::number;
      tok_.number = value;
      tok_.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) ++end;
      tok_.kind = Token::Kind::name;
      tok_.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      tok_.kind = Token::Kind::op;
      tok_.text = src_.substr(pos_, 1);
      ++pos_;
      return;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  bool at_op(char c) const { return tok_.kind == Token::Kind::op && tok_.text[0] == c; }

  int push(ExprNode n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int binary(ExprNode::Kind kind, int lhs, int rhs) {
    ExprNode n;
    n.kind = kind;
    n.lhs = lhs;
    n.rhs = rhs;
    return push(n);
  }

  int parse_expr() {
    int lhs = parse_term();
    while (at_op('+') || at_op('-')) {
      const auto kind = at_op('+') ? ExprNode::Kind::add : ExprNode::Kind::subtract;
      advance();
      lhs = binary(kind, lhs, parse_term());
    }
    return lhs;
  }

  int parse_term() {
    int lhs = parse_unary();
    while (at_op('*') || at_op('/')) {
      const auto kind = at_op('*') ? ExprNode::Kind::multiply : ExprNode::Kind::divide;
      advance();
      lhs = binary(kind, lhs, parse_unary());
    }
    return lhs;
  }

  int parse_unary() {
    if (at_op('-')) {
      advance();
      ExprNode n;
      n.kind = ExprNode::Kind::negate;
      n.lhs = parse_unary();
      return push(n);
    }
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (at_op('^')) {
      advance();
      return binary(ExprNode::Kind::power, base, parse_unary());
    }
    return base;
  }

  int parse_primary() {
    if (tok_.kind == Token::Kind::number) {
      ExprNode n;
      n.kind = ExprNode::Kind::number;
      n.number = tok_.number;
      advance();
      return push(n);
    }
    if (at_op('(')) {
      advance();
      const int inner = parse_expr();
      if (!at_op(')')) fail("expected ')'");
      advance();
      return inner;
    }
    if (tok_.kind == Token::Kind::name) {
      const Token name = tok_;
      advance();
      if (at_op('(')) return parse_call(name);
      for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == name.text) {
          ExprNode n;
          n.kind = ExprNode::Kind::variable;
          n.index = static_cast<int>(i);
          return push(n);
        }
      }
      if (name.text == "pi" || name.text == "e") {
        ExprNode n;
        n.kind = ExprNode::Kind::constant;
        n.index = name.text == "pi" ? 0 : 1;
        return push(n);
      }
      if (name.text == "abs" || lookup_function(name.text)) {
        throw ParseError("function '" + std::string(name.text) + "' requires an argument list", name.offset);
      }
      throw ParseError("unknown identifier '" + std::string(name.text) + "'", name.offset);
    }
    fail("expected an operand, found '" + std::string(tok_.text) + "'");
  }

  int parse_call(const Token& name) {
    if (name.text == "abs") {
      throw ParseError("non-smooth function 'abs' is not supported", name.offset);
    }
    const auto func = lookup_function(name.text);
    if (!func) throw ParseError("unknown function '" + std::string(name.text) + "'", name.offset);
    advance();  // '('
    std::vector<int> args;
    if (!at_op(')')) {
      args.push_back(parse_expr());
      while (at_op(',')) {
        advance();
        args.push_back(parse_expr());
      }
    }
    if (!at_op(')')) fail("expected ')' after function arguments");
    advance();
    if (args.size() != 1) {
      throw ParseError("function '" + std::string(name.text) + "' takes 1 argument, got " +
                           std::to_string(args.size()),
                       name.offset);
    }
    ExprNode n;
    n.kind = ExprNode::Kind::call;
    n.func = *func;
    n.lhs = args[0];
    return push(n);
  }

  std::string_view src_;
  const std::vector<std::string>& coords_;
  std::size_t pos_ = 0;
  Token tok_;
  std::vector<ExprNode> nodes_;
};

bool has_variable(const std::vector<ExprNode>& nodes, int id) {
  const ExprNode& n = nodes[static_cast<std::size_t>(id)];
  if (n.kind == ExprNode::Kind::variable) return true;
  if (n.lhs >= 0 && has_variable(nodes, n.lhs)) return true;
  return n.rhs >= 0 && has_variable(nodes, n.rhs);
}

void check_arena(const std::vector<ExprNode>& nodes, int root, std::size_t coord_count) {
  if (root < 0 || static_cast<std::size_t>(root) >= nodes.size()) throw std::invalid_argument("bad root index");
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const ExprNode& n = nodes[id];
    const auto child_ok = [&](int c) { return c >= 0 && static_cast<std::size_t>(c) < id; };
    using Kind = ExprNode::Kind;
    switch (n.kind) {
      case Kind::number:
        if (!std::isfinite(n.number) || n.number < 0.0) throw std::invalid_argument("literal must be finite and >= 0");
        break;
      case Kind::constant:
        if (n.index != 0 && n.index != 1) throw std::invalid_argument("bad constant index");
        break;
      case Kind::variable:
        if (n.index < 0 || static_cast<std::size_t>(n.index) >= coord_count) {
          throw std::invalid_argument("variable index outside coordinate list");
        }
        break;
      case Kind::negate:
      case Kind::call:
        if (!child_ok(n.lhs)) throw std::invalid_argument("bad operand index");
        break;
      default:
        if (!child_ok(n.lhs) || !child_ok(n.rhs)) throw std::invalid_argument("bad operand index");
    }
  }
}

}  // namespace

std::string_view function_name(Func f) {
  for (const auto& [n, fn] : kFunctions) {
    if (fn == f) return n;
  }
  return "?";
}

void validate_coordinate_names(const std::vector<std::string>& coordinates) {
  if (coordinates.empty()) throw std::invalid_argument("coordinate list is empty");
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    if (!is_identifier(coordinates[i])) {
      throw std::invalid_argument("coordinate name '" + coordinates[i] + "' is not an identifier");
    }
    if (is_reserved(coordinates[i])) {
      throw std::invalid_argument("coordinate name '" + coordinates[i] + "' is reserved");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (coordinates[i] == coordinates[j]) {
        throw std::invalid_argument("duplicate coordinate name '" + coordinates[i] + "'");
      }
    }
  }
}

ScalarField ScalarField::parse(std::string_view source, std::vector<std::string> coordinates) {
  validate_coordinate_names(coordinates);
  Parser parser(source, coordinates);
  const int root = parser.parse_all();
  ScalarField field(parser.take_nodes(), root, std::move(coordinates));
  auto impl = std::make_shared<Impl>(*field.impl_);
  impl->source = std::string(source);
  field.impl_ = std::move(impl);
  return field;
}

ScalarField::ScalarField(std::vector<ExprNode> nodes, int root, std::vector<std::string> coordinates) {
  check_arena(nodes, root, coordinates.size());
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    ExprNode& n = nodes[id];
    if (n.kind != ExprNode::Kind::power || has_variable(nodes, n.rhs)) continue;
    // Constant exponent: fold it once so evaluation can pick integer powering.
    ScalarField exponent_only(std::make_shared<const Impl>(Impl{nodes, n.rhs, {}, coordinates}));
    const std::vector<double> none(coordinates.size(), 0.0);
    double value = 0.0;
    try {
      value = exponent_only.evaluate<double>(std::span<const double>(none));
    } catch (const DomainError&) {
      continue;
    }
    if (std::isfinite(value) && value == std::round(value) && std::abs(value) <= 1024.0) {
      n.integer_exponent = true;
      n.exponent = static_cast<int>(value);
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->nodes = std::move(nodes);
  impl->root = root;
  impl->coordinates = std::move(coordinates);
  impl->source = ScalarField(impl).print();
  impl_ = std::move(impl);
}

std::set<std::string> ScalarField::free_variables() const {
  std::set<std::string> out;
  for (const auto& n : impl_->nodes) {
    if (n.kind == ExprNode::Kind::variable) out.insert(impl_->coordinates[static_cast<std::size_t>(n.index)]);
  }
  return out;
}

std::string ScalarField::print() const { return print_node(impl_->root); }

std::string ScalarField::print_node(int id) const {
  const ExprNode& n = impl_->nodes[static_cast<std::size_t>(id)];
  using Kind = ExprNode::Kind;
  switch (n.kind) {
    case Kind::number: {
      std::array<char, 64> buf{};
      const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.number);
      return std::string(buf.data(), ptr);
    }
    case Kind::constant:
      return n.index == 0 ? "pi" : "e";
    case Kind::variable:
      return impl_->coordinates[static_cast<std::size_t>(n.index)];
    case Kind::negate:
      return "(-" + print_node(n.lhs) + ")";
    case Kind::call:
      return std::string(function_name(n.func)) + "(" + print_node(n.lhs) + ")";
    case Kind::add:
      return "(" + print_node(n.lhs) + " + " + print_node(n.rhs) + ")";
    case Kind::subtract:
      return "(" + print_node(n.lhs) + " - " + print_node(n.rhs) + ")";
    case Kind::multiply:
      return "(" + print_node(n.lhs) + " * " + print_node(n.rhs) + ")";
    case Kind::divide:
      return "(" + print_node(n.lhs) + " / " + print_node(n.rhs) + ")";
    case Kind::power:
      return "(" + print_node(n.lhs) + " ^ " + print_node(n.rhs) + ")";
  }
  return "?";
}

bool ScalarField::structurally_equal(const ScalarField& other) const {
  if (impl_->coordinates != other.impl_->coordinates) return false;
  const auto same = [&](const auto& self, int a, int b) -> bool {
    const ExprNode& x = impl_->nodes[static_cast<std::size_t>(a)];
    const ExprNode& y = other.impl_->nodes[static_cast<std::size_t>(b)];
    if (x.kind != y.kind) return false;
    using Kind = ExprNode::Kind;
    switch (x.kind) {
      case Kind::number:
        return x.number == y.number;
      case Kind::constant:
      case Kind::variable:
        return x.index == y.index;
      case Kind::negate:
        return self(self, x.lhs, y.lhs);
      case Kind::call:
        return x.func == y.func && self(self, x.lhs, y.lhs);
      default:
        return self(self, x.lhs, y.lhs) && self(self, x.rhs, y.rhs);
    }
  };
  return same(same, impl_->root, other.impl_->root);
}

void ScalarField::domain_failure(int id, const std::string& what, double value) const {
  throw DomainError(what + " (value " + std::to_string(value) + ") in `" + print_node(id) + "`");
}

}  // namespace finslerlab
