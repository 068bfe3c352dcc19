#include "gna/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "gna/errors.hpp"

namespace gna {

namespace {

enum class Tok {
  number, ident, plus, minus, star, slash, caret, lparen, rparen, comma,
  lt, le, eq, ge, gt, end
};

struct Token {
  Tok type;
  std::string text;
  double value = 0.0;
  bool integral = false;
  std::size_t offset = 0;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      Token t = next();
      out.push_back(t);
      if (t.type == Tok::end) break;
    }
    return out;
  }

private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool starts_with(std::string_view s) const {
    return src_.substr(pos_, s.size()) == s;
  }

  Token next() {
    if (pos_ >= src_.size()) return {Tok::end, "", 0.0, false, pos_};
    const std::size_t at = pos_;
    const char c = src_[pos_];
    auto simple = [&](Tok t, std::size_t len) {
      pos_ += len;
      return Token{t, std::string(src_.substr(at, len)), 0.0, false, at};
    };
    switch (c) {
      case '+': return simple(Tok::plus, 1);
      case '-': return simple(Tok::minus, 1);
      case '*': return simple(Tok::star, 1);
      case '/': return simple(Tok::slash, 1);
      case '^': return simple(Tok::caret, 1);
      case '(': return simple(Tok::lparen, 1);
      case ')': return simple(Tok::rparen, 1);
      case ',': return simple(Tok::comma, 1);
      case '<': return starts_with("<=") ? simple(Tok::le, 2) : simple(Tok::lt, 1);
      case '>': return starts_with(">=") ? simple(Tok::ge, 2) : simple(Tok::gt, 1);
      case '=': return starts_with("==") ? simple(Tok::eq, 2) : simple(Tok::eq, 1);
      default: break;
    }
    if (starts_with("\xe2\x89\xa4")) return simple(Tok::le, 3); // U+2264
    if (starts_with("\xe2\x89\xa5")) return simple(Tok::ge, 3); // U+2265
    if (std::isdigit(static_cast<unsigned char>(c))) return number(at);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      Token t{Tok::ident, std::string(src_.substr(pos_, end - pos_)), 0.0, false, at};
      pos_ = end;
      return t;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                         std::to_string(at),
                     at, "number, identifier, or operator");
  }

  Token number(std::size_t at) {
    std::size_t end = pos_;
    bool integral = true;
    while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    if (end < src_.size() && src_[end] == '.') {
      integral = false;
      ++end;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
        integral = false;
        end = e;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
      }
    }
    std::string text(src_.substr(pos_, end - pos_));
    Token t{Tok::number, text, std::strtod(text.c_str(), nullptr), integral, at};
    pos_ = end;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

ExprPtr make_literal(double v) {
  auto n = std::make_shared<NetExpr>();
  n->kind = NetExpr::Kind::literal;
  n->literal_value = v;
  return n;
}

ExprPtr make_leaf(NetExpr::Kind k) {
  auto n = std::make_shared<NetExpr>();
  n->kind = k;
  return n;
}

ExprPtr make_unary(UnaryOp op, ExprPtr a) {
  auto n = std::make_shared<NetExpr>();
  n->kind = NetExpr::Kind::unary;
  n->uop = op;
  n->a = std::move(a);
  return n;
}

ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<NetExpr>();
  n->kind = NetExpr::Kind::binary;
  n->bop = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

ExprPtr make_pow(ExprPtr base, long e) {
  auto n = std::make_shared<NetExpr>();
  n->kind = NetExpr::Kind::pow;
  n->a = std::move(base);
  n->exponent = e;
  return n;
}

ExprPtr make_chi(PredPtr p) {
  auto n = std::make_shared<NetExpr>();
  n->kind = NetExpr::Kind::chi;
  n->pred = std::move(p);
  return n;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ExprPtr run() {
    ExprPtr e = expr();
    expect(Tok::end, "end of input");
    return e;
  }

private:
  const Token& peek() const { return toks_[i_]; }
  const Token& advance() { return toks_[i_++]; }
  bool accept(Tok t) {
    if (peek().type == t) {
      ++i_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string got = t.type == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError("syntax error at offset " + std::to_string(t.offset) + ": expected " +
                         expected + ", got " + got,
                     t.offset, expected);
  }
  void expect(Tok t, const std::string& expected) {
    if (!accept(t)) fail(expected);
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (true) {
      if (accept(Tok::plus)) e = make_binary(BinaryOp::add, e, term());
      else if (accept(Tok::minus)) e = make_binary(BinaryOp::sub, e, term());
      else return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (true) {
      if (accept(Tok::star)) e = make_binary(BinaryOp::mul, e, factor());
      else if (accept(Tok::slash)) e = make_binary(BinaryOp::div, e, factor());
      else return e;
    }
  }

  ExprPtr factor() {
    const bool negated = accept(Tok::minus);
    ExprPtr e = atom();
    if (accept(Tok::caret)) e = make_pow(std::move(e), integer("integer exponent"));
    if (negated) e = make_unary(UnaryOp::neg, std::move(e));
    return e;
  }

  long integer(const std::string& what) {
    const bool negative = accept(Tok::minus);
    if (peek().type != Tok::number || !peek().integral) fail(what);
    const Token& t = advance();
    long v = std::strtol(t.text.c_str(), nullptr, 10);
    return negative ? -v : v;
  }

  ExprPtr atom() {
    const Token& t = peek();
    if (t.type == Tok::number) {
      advance();
      return make_literal(t.value);
    }
    if (t.type == Tok::lparen) {
      advance();
      ExprPtr e = expr();
      expect(Tok::rparen, "')'");
      return e;
    }
    if (t.type == Tok::ident) {
      const std::string name = t.text;
      if (name == "eps") {
        advance();
        return make_leaf(NetExpr::Kind::eps);
      }
      if (name == "k") {
        advance();
        return make_leaf(NetExpr::Kind::index_k);
      }
      if (name == "chi") {
        advance();
        expect(Tok::lparen, "'('");
        PredPtr p = predicate();
        expect(Tok::rparen, "')'");
        return make_chi(std::move(p));
      }
      UnaryOp op;
      if (lookup_func(name, op)) {
        advance();
        expect(Tok::lparen, "'('");
        ExprPtr arg = expr();
        expect(Tok::rparen, "')'");
        return make_unary(op, std::move(arg));
      }
      fail("number, 'eps', 'k', function, 'chi', or '('");
    }
    fail("number, 'eps', 'k', function, 'chi', or '('");
  }

  static bool lookup_func(const std::string& name, UnaryOp& op) {
    if (name == "abs") op = UnaryOp::abs;
    else if (name == "sqrt") op = UnaryOp::sqrt;
    else if (name == "sin") op = UnaryOp::sin;
    else if (name == "cos") op = UnaryOp::cos;
    else if (name == "exp") op = UnaryOp::exp;
    else if (name == "log") op = UnaryOp::log;
    else return false;
    return true;
  }

  PredPtr predicate() {
    if (peek().type == Tok::ident) {
      const std::string name = peek().text;
      if (name == "even" || name == "odd") {
        advance();
        expect(Tok::lparen, "'('");
        if (peek().type != Tok::ident || peek().text != "k") fail("'k'");
        advance();
        expect(Tok::rparen, "')'");
        auto p = std::make_shared<Predicate>();
        p->kind = name == "even" ? Predicate::Kind::even : Predicate::Kind::odd;
        return p;
      }
      if (name == "mod") {
        advance();
        expect(Tok::lparen, "'('");
        if (peek().type != Tok::ident || peek().text != "k") fail("'k'");
        advance();
        expect(Tok::comma, "','");
        long m = integer("integer modulus");
        expect(Tok::comma, "','");
        long r = integer("integer remainder");
        expect(Tok::rparen, "')'");
        if (m < 1)
          throw ParseError("mod predicate requires modulus >= 1", peek().offset,
                           "positive modulus");
        auto p = std::make_shared<Predicate>();
        p->kind = Predicate::Kind::mod;
        p->mod_m = m;
        p->mod_r = r;
        return p;
      }
    }
    ExprPtr lhs = expr();
    CmpOp op;
    switch (peek().type) {
      case Tok::lt: op = CmpOp::lt; break;
      case Tok::le: op = CmpOp::le; break;
      case Tok::eq: op = CmpOp::eq; break;
      case Tok::ge: op = CmpOp::ge; break;
      case Tok::gt: op = CmpOp::gt; break;
      default: fail("comparison operator");
    }
    advance();
    ExprPtr rhs = expr();
    auto p = std::make_shared<Predicate>();
    p->kind = Predicate::Kind::cmp;
    p->lhs = std::move(lhs);
    p->rhs = std::move(rhs);
    p->cmp = op;
    return p;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// Shortest decimal rendering that parses back to the same double.
std::string format_number(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

const char* func_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::abs: return "abs";
    case UnaryOp::sqrt: return "sqrt";
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::exp: return "exp";
    case UnaryOp::log: return "log";
    case UnaryOp::neg: return "-";
  }
  return "?";
}

const char* cmp_name(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::eq: return "=";
    case CmpOp::ge: return ">=";
    case CmpOp::gt: return ">";
  }
  return "?";
}

// Precedence levels: add/sub 1, mul/div 2, unary minus 2, pow 3, atoms 4.
int precedence(const ExprPtr& e) {
  switch (e->kind) {
    case NetExpr::Kind::binary:
      return (e->bop == BinaryOp::add || e->bop == BinaryOp::sub) ? 1 : 2;
    case NetExpr::Kind::unary:
      return e->uop == UnaryOp::neg ? 2 : 4;
    case NetExpr::Kind::pow:
      return 3;
    default:
      return 4;
  }
}

void print(std::ostringstream& os, const ExprPtr& e, int min_prec) {
  const int prec = precedence(e);
  const bool parens = prec < min_prec;
  if (parens) os << '(';
  switch (e->kind) {
    case NetExpr::Kind::literal:
      os << format_number(e->literal_value);
      break;
    case NetExpr::Kind::eps:
      os << "eps";
      break;
    case NetExpr::Kind::index_k:
      os << "k";
      break;
    case NetExpr::Kind::unary:
      if (e->uop == UnaryOp::neg) {
        os << '-';
        print(os, e->a, 3);
      } else {
        os << func_name(e->uop) << '(';
        print(os, e->a, 1);
        os << ')';
      }
      break;
    case NetExpr::Kind::binary: {
      const char* op = e->bop == BinaryOp::add   ? " + "
                       : e->bop == BinaryOp::sub ? " - "
                       : e->bop == BinaryOp::mul ? " * "
                                                 : " / ";
      print(os, e->a, prec);
      os << op;
      print(os, e->b, prec + 1);
      break;
    }
    case NetExpr::Kind::pow:
      print(os, e->a, 4);
      os << '^' << e->exponent;
      break;
    case NetExpr::Kind::chi:
      os << "chi(";
      switch (e->pred->kind) {
        case Predicate::Kind::even: os << "even(k)"; break;
        case Predicate::Kind::odd: os << "odd(k)"; break;
        case Predicate::Kind::mod:
          os << "mod(k, " << e->pred->mod_m << ", " << e->pred->mod_r << ')';
          break;
        case Predicate::Kind::cmp:
          print(os, e->pred->lhs, 1);
          os << ' ' << cmp_name(e->pred->cmp) << ' ';
          print(os, e->pred->rhs, 1);
          break;
      }
      os << ')';
      break;
  }
  if (parens) os << ')';
}

double eval_at(const ExprPtr& e, const EpsGrid& grid, std::size_t i);

bool pred_at(const Predicate& p, const EpsGrid& grid, std::size_t i) {
  const long k = grid.index_label(i);
  auto norm_mod = [](long a, long m) { return ((a % m) + m) % m; };
  switch (p.kind) {
    case Predicate::Kind::even: return norm_mod(k, 2) == 0;
    case Predicate::Kind::odd: return norm_mod(k, 2) == 1;
    case Predicate::Kind::mod: return norm_mod(k, p.mod_m) == norm_mod(p.mod_r, p.mod_m);
    case Predicate::Kind::cmp: {
      const double l = eval_at(p.lhs, grid, i);
      const double r = eval_at(p.rhs, grid, i);
      switch (p.cmp) {
        case CmpOp::lt: return l < r;
        case CmpOp::le: return l <= r;
        case CmpOp::eq: return l == r;
        case CmpOp::ge: return l >= r;
        case CmpOp::gt: return l > r;
      }
    }
  }
  return false;
}

double eval_at(const ExprPtr& e, const EpsGrid& grid, std::size_t i) {
  switch (e->kind) {
    case NetExpr::Kind::literal:
      return e->literal_value;
    case NetExpr::Kind::eps:
      return grid.eps(i);
    case NetExpr::Kind::index_k:
      return static_cast<double>(grid.index_label(i));
    case NetExpr::Kind::unary: {
      const double v = eval_at(e->a, grid, i);
      switch (e->uop) {
        case UnaryOp::neg: return -v;
        case UnaryOp::abs: return std::fabs(v);
        case UnaryOp::sqrt:
          if (v < 0.0)
            throw EvalError("sqrt of a negative value at sample " + std::to_string(i),
                            static_cast<std::ptrdiff_t>(i));
          return std::sqrt(v);
        case UnaryOp::sin: return std::sin(v);
        case UnaryOp::cos: return std::cos(v);
        case UnaryOp::exp: return std::exp(v);
        case UnaryOp::log:
          if (v <= 0.0)
            throw EvalError("log of a nonpositive value at sample " + std::to_string(i),
                            static_cast<std::ptrdiff_t>(i));
          return std::log(v);
      }
      return 0.0;
    }
    case NetExpr::Kind::binary: {
      const double l = eval_at(e->a, grid, i);
      const double r = eval_at(e->b, grid, i);
      switch (e->bop) {
        case BinaryOp::add: return l + r;
        case BinaryOp::sub: return l - r;
        case BinaryOp::mul: return l * r;
        case BinaryOp::div:
          if (r == 0.0)
            throw EvalError("division by an exact zero at sample " + std::to_string(i),
                            static_cast<std::ptrdiff_t>(i));
          return l / r;
      }
      return 0.0;
    }
    case NetExpr::Kind::pow:
      return pow_sample(Cplx(eval_at(e->a, grid, i), 0.0), e->exponent, i, ScalarKind::real)
          .real();
    case NetExpr::Kind::chi:
      return pred_at(*e->pred, grid, i) ? 1.0 : 0.0;
  }
  return 0.0;
}

} // namespace

ExprPtr parse(std::string_view source) {
  Lexer lex(source);
  return Parser(lex.run()).run();
}

std::string pretty(const ExprPtr& e) {
  std::ostringstream os;
  print(os, e, 1);
  return os.str();
}

bool structural_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case NetExpr::Kind::literal:
      return a->literal_value == b->literal_value;
    case NetExpr::Kind::eps:
    case NetExpr::Kind::index_k:
      return true;
    case NetExpr::Kind::unary:
      return a->uop == b->uop && structural_equal(a->a, b->a);
    case NetExpr::Kind::binary:
      return a->bop == b->bop && structural_equal(a->a, b->a) && structural_equal(a->b, b->b);
    case NetExpr::Kind::pow:
      return a->exponent == b->exponent && structural_equal(a->a, b->a);
    case NetExpr::Kind::chi: {
      const Predicate& p = *a->pred;
      const Predicate& q = *b->pred;
      if (p.kind != q.kind) return false;
      switch (p.kind) {
        case Predicate::Kind::even:
        case Predicate::Kind::odd:
          return true;
        case Predicate::Kind::mod:
          return p.mod_m == q.mod_m && p.mod_r == q.mod_r;
        case Predicate::Kind::cmp:
          return p.cmp == q.cmp && structural_equal(p.lhs, q.lhs) &&
                 structural_equal(p.rhs, q.rhs);
      }
      return false;
    }
  }
  return false;
}

GenScalar eval(const ExprPtr& e, const GridPtr& grid) {
  if (!grid) throw StructuralError("eval requires a grid");
  std::vector<double> samples(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) samples[i] = eval_at(e, *grid, i);
  return GenScalar::from_real_samples(grid, std::move(samples));
}

Idempotent eval_mask(const ExprPtr& e, const GridPtr& grid) {
  return Idempotent::from_scalar(eval(e, grid));
}

GenScalar eval_scalar(std::string_view source, const GridPtr& grid) {
  return eval(parse(source), grid);
}

} // namespace gna
