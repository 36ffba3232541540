#include "mpak/expr/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace mpak::expr {

namespace {

constexpr std::size_t kMaxSourceBytes = 64 * 1024;
constexpr double kInf = std::numeric_limits<double>::infinity();

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Number;
  n->number = v;
  return n;
}

NodePtr make_variable() {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_call(Fn fn, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = Op::Call;
  n->fn = fn;
  n->lhs = std::move(a);
  return n;
}

bool is_number(const NodePtr& n, double v) { return n->op == Op::Number && n->number == v; }
bool is_number(const NodePtr& n) { return n->op == Op::Number; }

double apply(Fn fn, double x) {
  switch (fn) {
    case Fn::Exp: return std::exp(x);
    case Fn::Log: return std::log(x);
    case Fn::Sinh: return std::sinh(x);
    case Fn::Cosh: return std::cosh(x);
    case Fn::Tanh: return std::tanh(x);
    case Fn::Sqrt: return std::sqrt(x);
    case Fn::Abs: return std::abs(x);
    case Fn::Sign: return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
  }
  return std::nan("");
}

double eval(const Node& n, double x) {
  switch (n.op) {
    case Op::Number: return n.number;
    case Op::Variable: return x;
    case Op::Neg: return -eval(*n.lhs, x);
    case Op::Add: return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Op::Sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
    case Op::Mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Op::Div: return eval(*n.lhs, x) / eval(*n.rhs, x);
    case Op::Pow: return std::pow(eval(*n.lhs, x), eval(*n.rhs, x));
    case Op::Call: return apply(n.fn, eval(*n.lhs, x));
  }
  return std::nan("");
}

LogValue log_pow(LogValue base, double e) {
  if (base.sign == 0) {
    if (e > 0) return {};
    if (e == 0) return LogValue::from(1.0);
    return {1, kInf};
  }
  if (base.sign > 0) return {1, e * base.log_abs};
  if (std::floor(e) != e) return {1, std::nan("")};
  const bool odd = std::fmod(std::abs(e), 2.0) == 1.0;
  return {odd ? -1 : 1, e * base.log_abs};
}

LogValue log_apply(Fn fn, LogValue a) {
  switch (fn) {
    case Fn::Exp: return {1, a.value()};
    case Fn::Log:
      if (a.sign <= 0) return {1, std::nan("")};
      return LogValue::from(a.log_abs);
    case Fn::Sinh:
    case Fn::Cosh: {
      const double x = a.value();
      if (std::abs(x) < 20.0) return LogValue::from(apply(fn, x));
      const int s = fn == Fn::Cosh ? 1 : (x > 0 ? 1 : -1);
      return {s, std::abs(x) - std::numbers::ln2};
    }
    case Fn::Tanh: return LogValue::from(std::tanh(a.value()));
    case Fn::Sqrt:
      if (a.sign < 0) return {1, std::nan("")};
      return {a.sign, 0.5 * a.log_abs};
    case Fn::Abs: return {a.sign == 0 ? 0 : 1, a.log_abs};
    case Fn::Sign: return LogValue::from(static_cast<double>(a.sign));
  }
  return {1, std::nan("")};
}

LogValue eval_log(const Node& n, double x) {
  switch (n.op) {
    case Op::Number: return LogValue::from(n.number);
    case Op::Variable: return LogValue::from(x);
    case Op::Neg: return -eval_log(*n.lhs, x);
    case Op::Add: return eval_log(*n.lhs, x) + eval_log(*n.rhs, x);
    case Op::Sub: return eval_log(*n.lhs, x) + (-eval_log(*n.rhs, x));
    case Op::Mul: return eval_log(*n.lhs, x) * eval_log(*n.rhs, x);
    case Op::Div: return eval_log(*n.lhs, x) / eval_log(*n.rhs, x);
    case Op::Pow: return log_pow(eval_log(*n.lhs, x), eval(*n.rhs, x));
    case Op::Call: return log_apply(n.fn, eval_log(*n.lhs, x));
  }
  return {1, std::nan("")};
}

bool mentions_variable(const Node& n) {
  if (n.op == Op::Variable) return true;
  if (n.op == Op::Number) return false;
  if (n.lhs && mentions_variable(*n.lhs)) return true;
  return n.rhs && mentions_variable(*n.rhs);
}

// ---------------------------------------------------------------- simplify

NodePtr simplify(const NodePtr& n);

NodePtr simplify_binary(Op op, NodePtr a, NodePtr b) {
  if (is_number(a) && is_number(b)) {
    Node tmp;
    tmp.op = op;
    tmp.lhs = a;
    tmp.rhs = b;
    const double v = eval(tmp, 0.0);
    if (std::isfinite(v)) return make_number(v);
  }
  switch (op) {
    case Op::Add:
      if (is_number(a, 0.0)) return b;
      if (is_number(b, 0.0)) return a;
      if (b->op == Op::Neg) return simplify_binary(Op::Sub, a, b->lhs);
      break;
    case Op::Sub:
      if (is_number(b, 0.0)) return a;
      if (is_number(a, 0.0)) return simplify(make_unary(Op::Neg, b));
      if (b->op == Op::Neg) return simplify_binary(Op::Add, a, b->lhs);
      break;
    case Op::Mul:
      if (is_number(a, 0.0) || is_number(b, 0.0)) return make_number(0.0);
      if (is_number(a, 1.0)) return b;
      if (is_number(b, 1.0)) return a;
      if (is_number(a, -1.0)) return simplify(make_unary(Op::Neg, b));
      if (is_number(b, -1.0)) return simplify(make_unary(Op::Neg, a));
      if (is_number(b) && !is_number(a)) return make_binary(Op::Mul, b, a);
      break;
    case Op::Div:
      if (is_number(b, 1.0)) return a;
      if (is_number(a, 0.0) && !is_number(b, 0.0)) return make_number(0.0);
      break;
    case Op::Pow:
      if (is_number(b, 1.0)) return a;
      if (is_number(b, 0.0)) return make_number(1.0);
      if (is_number(a, 1.0)) return make_number(1.0);
      break;
    default:
      break;
  }
  return make_binary(op, std::move(a), std::move(b));
}

NodePtr simplify(const NodePtr& n) {
  switch (n->op) {
    case Op::Number:
    case Op::Variable:
      return n;
    case Op::Neg: {
      auto a = simplify(n->lhs);
      if (is_number(a)) return make_number(-a->number);
      if (a->op == Op::Neg) return a->lhs;
      return make_unary(Op::Neg, a);
    }
    case Op::Call: {
      auto a = simplify(n->lhs);
      if (is_number(a)) {
        const double v = apply(n->fn, a->number);
        if (std::isfinite(v)) return make_number(v);
      }
      if (n->fn == Fn::Log && a->op == Op::Call && a->fn == Fn::Exp) return a->lhs;
      return make_call(n->fn, a);
    }
    default:
      return simplify_binary(n->op, simplify(n->lhs), simplify(n->rhs));
  }
}

// -------------------------------------------------------------- derivative

NodePtr derive(const NodePtr& n) {
  const auto num = [](double v) { return make_number(v); };
  switch (n->op) {
    case Op::Number: return num(0.0);
    case Op::Variable: return num(1.0);
    case Op::Neg: return make_unary(Op::Neg, derive(n->lhs));
    case Op::Add: return make_binary(Op::Add, derive(n->lhs), derive(n->rhs));
    case Op::Sub: return make_binary(Op::Sub, derive(n->lhs), derive(n->rhs));
    case Op::Mul:
      return make_binary(Op::Add, make_binary(Op::Mul, derive(n->lhs), n->rhs),
                         make_binary(Op::Mul, n->lhs, derive(n->rhs)));
    case Op::Div:
      return make_binary(
          Op::Div,
          make_binary(Op::Sub, make_binary(Op::Mul, derive(n->lhs), n->rhs),
                      make_binary(Op::Mul, n->lhs, derive(n->rhs))),
          make_binary(Op::Pow, n->rhs, num(2.0)));
    case Op::Pow: {
      const auto& base = n->lhs;
      const auto& ex = n->rhs;
      if (!mentions_variable(*ex)) {
        // c * a^(c-1) * a'
        return make_binary(
            Op::Mul,
            make_binary(Op::Mul, ex, make_binary(Op::Pow, base, make_binary(Op::Sub, ex, num(1.0)))),
            derive(base));
      }
      // a^b * (b' log a + b a'/a)
      auto inner = make_binary(
          Op::Add, make_binary(Op::Mul, derive(ex), make_call(Fn::Log, base)),
          make_binary(Op::Div, make_binary(Op::Mul, ex, derive(base)), base));
      return make_binary(Op::Mul, n, inner);
    }
    case Op::Call: {
      const auto& a = n->lhs;
      NodePtr outer;
      switch (n->fn) {
        case Fn::Exp: outer = n; break;
        case Fn::Log: outer = make_binary(Op::Div, num(1.0), a); break;
        case Fn::Sinh: outer = make_call(Fn::Cosh, a); break;
        case Fn::Cosh: outer = make_call(Fn::Sinh, a); break;
        case Fn::Tanh:
          outer = make_binary(Op::Sub, num(1.0), make_binary(Op::Pow, n, num(2.0)));
          break;
        case Fn::Sqrt: outer = make_binary(Op::Div, num(0.5), n); break;
        case Fn::Abs: outer = make_call(Fn::Sign, a); break;
        case Fn::Sign: outer = num(0.0); break;
      }
      return make_binary(Op::Mul, outer, derive(a));
    }
  }
  return num(0.0);
}

// ---------------------------------------------------------------- printing

int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Number: return n.number < 0 ? 3 : 5;
    default: return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

void print(const Node& n, const std::string& var, std::string& out);

void print_child(const Node& child, int parent_prec, bool strict, const std::string& var,
                 std::string& out) {
  const int p = precedence(child);
  const bool paren = strict ? p <= parent_prec : p < parent_prec;
  if (paren) out += '(';
  print(child, var, out);
  if (paren) out += ')';
}

void print(const Node& n, const std::string& var, std::string& out) {
  switch (n.op) {
    case Op::Number: out += format_number(n.number); return;
    case Op::Variable: out += var; return;
    case Op::Neg:
      out += '-';
      print_child(*n.lhs, 3, false, var, out);
      return;
    case Op::Call:
      out += fn_name(n.fn);
      out += '(';
      print(*n.lhs, var, out);
      out += ')';
      return;
    case Op::Pow:
      print_child(*n.lhs, 4, true, var, out);
      out += '^';
      print_child(*n.rhs, 3, false, var, out);
      return;
    default: {
      const int p = precedence(n);
      print_child(*n.lhs, p, false, var, out);
      out += n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? "*" : "/";
      print_child(*n.rhs, p, true, var, out);
      return;
    }
  }
}

// ----------------------------------------------------------------- parsing

struct Token {
  enum Kind { Number, Ident, Symbol, End } kind = End;
  std::string text;
  double value = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.kind = Token::Number;
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
          advance();
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
          std::size_t look = pos_ + 1;
          if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
          if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
            while (pos_ < look) advance();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
              advance();
          }
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
          throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Ident;
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
        t.kind = Token::Symbol;
        t.text = std::string(1, c);
        advance();
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string_view variable)
      : tokens_(std::move(tokens)), variable_(variable) {}

  NodePtr run() {
    auto n = expression();
    if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
    return n;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool accept(const char* sym) {
    if (peek().kind == Token::Symbol && peek().text == sym) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }
  void expect(const char* sym) {
    if (!accept(sym)) fail(std::string("expected '") + sym + "'");
  }

  NodePtr expression() {
    auto n = term();
    while (true) {
      if (accept("+"))
        n = make_binary(Op::Add, n, term());
      else if (accept("-"))
        n = make_binary(Op::Sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    auto n = unary();
    while (true) {
      if (accept("*"))
        n = make_binary(Op::Mul, n, unary());
      else if (accept("/"))
        n = make_binary(Op::Div, n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (accept("-")) return make_unary(Op::Neg, unary());
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept("^")) return make_binary(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    const Token& t = peek();
    if (t.kind == Token::Number) {
      ++pos_;
      return make_number(t.value);
    }
    if (t.kind == Token::Ident) {
      const Token ident = t;
      ++pos_;
      if (accept("(")) return call(ident);
      if (ident.text == variable_) return make_variable();
      if (ident.text == "pi") return make_number(std::numbers::pi);
      throw ParseError("unknown identifier '" + ident.text + "'", ident.line, ident.column);
    }
    if (accept("(")) {
      auto n = expression();
      expect(")");
      return n;
    }
    if (t.kind == Token::End) fail("unexpected end of input");
    fail("unexpected '" + t.text + "'");
  }

  NodePtr call(const Token& ident) {
    std::vector<NodePtr> args;
    args.push_back(expression());
    while (accept(",")) args.push_back(expression());
    expect(")");
    const auto arity = [&](std::size_t n) {
      if (args.size() != n)
        throw ParseError(ident.text + " expects " + std::to_string(n) + " argument(s)", ident.line,
                         ident.column);
    };
    if (ident.text == "pow") {
      arity(2);
      return make_binary(Op::Pow, args[0], args[1]);
    }
    static constexpr std::array<std::pair<std::string_view, Fn>, 8> kFns{{
        {"exp", Fn::Exp},
        {"log", Fn::Log},
        {"sinh", Fn::Sinh},
        {"cosh", Fn::Cosh},
        {"tanh", Fn::Tanh},
        {"sqrt", Fn::Sqrt},
        {"abs", Fn::Abs},
        {"sign", Fn::Sign},
    }};
    for (const auto& [name, fn] : kFns) {
      if (ident.text == name) {
        arity(1);
        return make_call(fn, args[0]);
      }
    }
    throw ParseError("unknown function '" + ident.text + "'", ident.line, ident.column);
  }

  std::vector<Token> tokens_;
  std::string_view variable_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(const std::string& what, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------- LogValue

LogValue LogValue::from(double x) {
  if (std::isnan(x)) return {1, x};
  if (x == 0.0) return {};
  return {x > 0 ? 1 : -1, std::log(std::abs(x))};
}

double LogValue::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

LogValue operator*(LogValue a, LogValue b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.sign * b.sign, a.log_abs + b.log_abs};
}

LogValue operator/(LogValue a, LogValue b) {
  if (b.sign == 0) return {a.sign == 0 ? 1 : a.sign, a.sign == 0 ? std::nan("") : kInf};
  if (a.sign == 0) return {};
  return {a.sign * b.sign, a.log_abs - b.log_abs};
}

LogValue operator+(LogValue a, LogValue b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  if (a.log_abs < b.log_abs) std::swap(a, b);
  if (std::isinf(a.log_abs)) return a;
  const double d = std::exp(b.log_abs - a.log_abs);
  if (a.sign == b.sign) return {a.sign, a.log_abs + std::log1p(d)};
  if (d == 1.0) return {};
  return {a.sign, a.log_abs + std::log1p(-d)};
}

LogValue operator-(LogValue a) { return {-a.sign, a.log_abs}; }

// -------------------------------------------------------------------- Expr

Expr::Expr() : root_(make_number(0.0)), variable_("r") {}

Expr::Expr(NodePtr root, std::string variable)
    : root_(std::move(root)), variable_(std::move(variable)) {}

Expr Expr::constant(double value, std::string variable) {
  return Expr(make_number(value), std::move(variable));
}

Expr Expr::var(std::string variable) { return Expr(make_variable(), std::move(variable)); }

double Expr::operator()(double x) const { return eval(*root_, x); }

LogValue Expr::eval_log(double x) const { return mpak::expr::eval_log(*root_, x); }

Expr Expr::derivative() const { return Expr(simplify(derive(root_)), variable_); }

Expr Expr::simplified() const { return Expr(simplify(root_), variable_); }

bool Expr::is_constant() const { return !mentions_variable(*root_); }

std::string Expr::str() const {
  std::string out;
  print(*root_, variable_, out);
  return out;
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(make_binary(Op::Add, a.root_, b.root_), a.variable_);
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(make_binary(Op::Sub, a.root_, b.root_), a.variable_);
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(make_binary(Op::Mul, a.root_, b.root_), a.variable_);
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(make_binary(Op::Div, a.root_, b.root_), a.variable_);
}
Expr operator-(const Expr& a) { return Expr(make_unary(Op::Neg, a.root_), a.variable_); }
Expr pow(const Expr& a, const Expr& b) {
  return Expr(make_binary(Op::Pow, a.root_, b.root_), a.variable_);
}
Expr call(Fn fn, const Expr& a) { return Expr(make_call(fn, a.root_), a.variable_); }

Expr parse(std::string_view src, std::string_view variable) {
  if (src.size() > kMaxSourceBytes) throw ParseError("expression exceeds 64 KiB", 1, 1);
  Lexer lexer(src);
  Parser parser(lexer.run(), variable);
  return Expr(parser.run(), std::string(variable));
}

std::string_view fn_name(Fn fn) {
  switch (fn) {
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sinh: return "sinh";
    case Fn::Cosh: return "cosh";
    case Fn::Tanh: return "tanh";
    case Fn::Sqrt: return "sqrt";
    case Fn::Abs: return "abs";
    case Fn::Sign: return "sign";
  }
  return "?";
}

}  // namespace mpak::expr
