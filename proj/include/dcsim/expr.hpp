#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "dcsim/types.hpp"

namespace dcsim::expr {

enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };

std::string_view to_string(CmpOp op);

class Expr;

struct Comparison {
  std::string variable;
  CmpOp op;
  DataWord constant;
};

struct Negation;
struct Conjunction;
struct Disjunction;

/**
 * Immutable Boolean condition over external variables.
 *
 * Every leaf is a comparison between one variable and an unsigned constant,
 * so an expression always references at least one variable. Nodes are shared
 * between copies; equality is structural.
 */
class Expr {
 public:
  using Node = std::variant<Comparison, Negation, Conjunction, Disjunction>;

  static Expr compare(std::string variable, CmpOp op, DataWord constant);
  static Expr negate(Expr operand);
  static Expr all_of(Expr lhs, Expr rhs);
  static Expr any_of(Expr lhs, Expr rhs);

  const Node& node() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Negation {
  Expr operand;
};

struct Conjunction {
  Expr lhs;
  Expr rhs;
};

struct Disjunction {
  Expr lhs;
  Expr rhs;
};

inline const Expr::Node& Expr::node() const { return *node_; }

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message);

  /// Byte offset into the input where the error was detected.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grammar, lowest precedence first: `||`, `&&`, `!`, comparison, parentheses.
Expr parse(std::string_view text);

/// Canonical text; `parse(render(e)) == e` for every expression.
std::string render(const Expr& e);

/// Throws EvalError when a referenced variable is missing from `nu`.
bool eval(const Expr& e, const Valuation& nu);

/// Evaluates an expression that only references `variable` against one value.
bool eval_single(const Expr& e, std::string_view variable, DataWord value);

std::set<std::string> variables(const Expr& e);

}  // namespace dcsim::expr
