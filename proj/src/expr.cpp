#include "dcsim/expr.hpp"

#include <cctype>
#include <charconv>
#include <utility>

namespace dcsim::expr {

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

Expr Expr::compare(std::string variable, CmpOp op, DataWord constant) {
  return Expr(std::make_shared<const Node>(Comparison{std::move(variable), op, constant}));
}

Expr Expr::negate(Expr operand) {
  return Expr(std::make_shared<const Node>(Negation{std::move(operand)}));
}

Expr Expr::all_of(Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(Conjunction{std::move(lhs), std::move(rhs)}));
}

Expr Expr::any_of(Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(Disjunction{std::move(lhs), std::move(rhs)}));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = a.node();
  const auto& y = b.node();
  if (x.index() != y.index()) return false;
  if (const auto* c = std::get_if<Comparison>(&x)) {
    const auto& d = std::get<Comparison>(y);
    return c->variable == d.variable && c->op == d.op && c->constant == d.constant;
  }
  if (const auto* n = std::get_if<Negation>(&x)) {
    return n->operand == std::get<Negation>(y).operand;
  }
  if (const auto* c = std::get_if<Conjunction>(&x)) {
    const auto& d = std::get<Conjunction>(y);
    return c->lhs == d.lhs && c->rhs == d.rhs;
  }
  const auto& c = std::get<Disjunction>(x);
  const auto& d = std::get<Disjunction>(y);
  return c.lhs == d.lhs && c.rhs == d.rhs;
}

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("at position " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

enum class Tok { Ident, Number, Op, LParen, RParen, Not, And, Or, End };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
  CmpOp op = CmpOp::Eq;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ == src_.size()) return {Tok::End, {}, start};

    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      return {Tok::Ident, src_.substr(start, pos_ - start), start};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return {Tok::Number, src_.substr(start, pos_ - start), start};
    }
    if (c == '(') return single(Tok::LParen);
    if (c == ')') return single(Tok::RParen);

    // Maximal munch over the operator alphabet so that e.g. "=>" or "<>" is
    // reported as one unknown operator rather than two valid pieces.
    constexpr std::string_view kOpChars = "<>=!&|";
    while (pos_ < src_.size() && kOpChars.find(src_[pos_]) != std::string_view::npos) ++pos_;
    const auto text = src_.substr(start, pos_ - start);
    if (text.empty()) {
      throw ParseError(start, std::string("unexpected character '") + c + "'");
    }
    if (text == "&&") return {Tok::And, text, start};
    if (text == "||") return {Tok::Or, text, start};
    if (text == "<") return {Tok::Op, text, start, CmpOp::Lt};
    if (text == "<=") return {Tok::Op, text, start, CmpOp::Le};
    if (text == "==") return {Tok::Op, text, start, CmpOp::Eq};
    if (text == "!=") return {Tok::Op, text, start, CmpOp::Ne};
    if (text == ">=") return {Tok::Op, text, start, CmpOp::Ge};
    if (text == ">") return {Tok::Op, text, start, CmpOp::Gt};
    if (text.find_first_not_of('!') == std::string_view::npos) {
      // A run of negations; hand them out one at a time.
      pos_ = start + 1;
      return {Tok::Not, text.substr(0, 1), start};
    }
    throw ParseError(start, "unknown operator '" + std::string(text) + "'");
  }

 private:
  Token single(Tok kind) {
    const std::size_t start = pos_++;
    return {kind, src_.substr(start, 1), start};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src), tok_(lexer_.next()) {}

  Expr parse_all() {
    Expr e = parse_or();
    if (tok_.kind != Tok::End) {
      throw ParseError(tok_.pos, "unexpected '" + std::string(tok_.text) + "'");
    }
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (tok_.kind == Tok::Or) {
      advance();
      lhs = Expr::any_of(std::move(lhs), parse_and());
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_unary();
    while (tok_.kind == Tok::And) {
      advance();
      lhs = Expr::all_of(std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (tok_.kind == Tok::Not) {
      advance();
      return Expr::negate(parse_unary());
    }
    return parse_primary();
  }

  Expr parse_primary() {
    if (tok_.kind == Tok::LParen) {
      advance();
      Expr inner = parse_or();
      if (tok_.kind != Tok::RParen) throw ParseError(tok_.pos, "expected ')'");
      advance();
      return inner;
    }
    if (tok_.kind != Tok::Ident) {
      throw ParseError(tok_.pos, tok_.kind == Tok::End ? "unexpected end of expression"
                                                       : "expected variable, found '" +
                                                             std::string(tok_.text) + "'");
    }
    std::string variable(tok_.text);
    advance();
    if (tok_.kind != Tok::Op) throw ParseError(tok_.pos, "expected comparison operator");
    const CmpOp op = tok_.op;
    advance();
    if (tok_.kind != Tok::Number) throw ParseError(tok_.pos, "expected unsigned constant");
    DataWord value = 0;
    const auto* first = tok_.text.data();
    const auto* last = first + tok_.text.size();
    if (auto [p, ec] = std::from_chars(first, last, value); ec != std::errc() || p != last) {
      throw ParseError(tok_.pos, "constant out of range");
    }
    advance();
    return Expr::compare(std::move(variable), op, value);
  }

  Lexer lexer_;
  Token tok_;
};

// Binding strength used by render(); higher binds tighter.
int precedence(const Expr::Node& n) {
  if (std::holds_alternative<Disjunction>(n)) return 1;
  if (std::holds_alternative<Conjunction>(n)) return 2;
  return 3;
}

void render_into(const Expr& e, std::string& out);

void render_operand(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e.node()) < min_prec) {
    out += '(';
    render_into(e, out);
    out += ')';
  } else {
    render_into(e, out);
  }
}

void render_into(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comparison>) {
          out += n.variable;
          out += ' ';
          out += to_string(n.op);
          out += ' ';
          out += std::to_string(n.constant);
        } else if constexpr (std::is_same_v<T, Negation>) {
          out += '!';
          if (std::holds_alternative<Negation>(n.operand.node())) {
            render_into(n.operand, out);
          } else {
            out += '(';
            render_into(n.operand, out);
            out += ')';
          }
        } else if constexpr (std::is_same_v<T, Conjunction>) {
          // Left-associative: a right operand of equal precedence needs parentheses.
          render_operand(n.lhs, 2, out);
          out += " && ";
          render_operand(n.rhs, 3, out);
        } else {
          render_operand(n.lhs, 1, out);
          out += " || ";
          render_operand(n.rhs, 2, out);
        }
      },
      e.node());
}

bool compare(CmpOp op, DataWord lhs, DataWord rhs) {
  switch (op) {
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Gt: return lhs > rhs;
  }
  return false;
}

template <typename Lookup>
bool eval_with(const Expr& e, const Lookup& lookup) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comparison>) {
          return compare(n.op, lookup(n.variable), n.constant);
        } else if constexpr (std::is_same_v<T, Negation>) {
          return !eval_with(n.operand, lookup);
        } else if constexpr (std::is_same_v<T, Conjunction>) {
          return eval_with(n.lhs, lookup) && eval_with(n.rhs, lookup);
        } else {
          return eval_with(n.lhs, lookup) || eval_with(n.rhs, lookup);
        }
      },
      e.node());
}

void collect(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comparison>) {
          out.insert(n.variable);
        } else if constexpr (std::is_same_v<T, Negation>) {
          collect(n.operand, out);
        } else {
          collect(n.lhs, out);
          collect(n.rhs, out);
        }
      },
      e.node());
}

}  // namespace

Expr parse(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError(0, "empty expression");
  }
  return Parser(text).parse_all();
}

std::string render(const Expr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

bool eval(const Expr& e, const Valuation& nu) {
  return eval_with(e, [&](const std::string& name) {
    const auto it = nu.find(name);
    if (it == nu.end()) throw EvalError("unknown variable '" + name + "'");
    return it->second;
  });
}

bool eval_single(const Expr& e, std::string_view variable, DataWord value) {
  return eval_with(e, [&](const std::string& name) {
    if (name != variable) throw EvalError("unknown variable '" + name + "'");
    return value;
  });
}

std::set<std::string> variables(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

}  // namespace dcsim::expr
