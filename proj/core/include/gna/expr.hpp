#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "gna/scalar.hpp"

namespace gna {

// Textual surface for net representatives.  Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ['-'] atom ('^' int)?
//   atom   := number | 'eps' | 'k' | func '(' expr ')'
//           | 'chi' '(' pred ')' | '(' expr ')'
//   func   := abs | sqrt | sin | cos | exp | log
//   pred   := even(k) | odd(k) | mod(k, int, int) | expr cmp expr
//   cmp    := < | <= | = | >= | >
// '^' takes an integer literal exponent and binds tightest; chi evaluates to
// exactly 0 or 1 at every index.

struct NetExpr;
using ExprPtr = std::shared_ptr<const NetExpr>;

enum class UnaryOp { neg, abs, sqrt, sin, cos, exp, log };
enum class BinaryOp { add, sub, mul, div };
enum class CmpOp { lt, le, eq, ge, gt };

struct Predicate {
  enum class Kind { even, odd, mod, cmp };
  Kind kind;
  long mod_m = 0, mod_r = 0; // mod(k, m, r)
  ExprPtr lhs, rhs;          // cmp operands
  CmpOp cmp = CmpOp::eq;
};
using PredPtr = std::shared_ptr<const Predicate>;

struct NetExpr {
  enum class Kind { literal, eps, index_k, unary, binary, pow, chi };
  Kind kind;
  double literal_value = 0.0;
  UnaryOp uop = UnaryOp::neg;
  BinaryOp bop = BinaryOp::add;
  ExprPtr a, b; // unary operand in a; pow base in a
  long exponent = 0;
  PredPtr pred;
};

ExprPtr parse(std::string_view source); // throws ParseError

// Minimal-parentheses rendering; parse(pretty(e)) is structurally equal to e
// for every parser-produced AST.
std::string pretty(const ExprPtr& e);

bool structural_equal(const ExprPtr& a, const ExprPtr& b);

// Evaluates at every grid sample; always produces a real-kind scalar.
// Domain failures (log of a nonpositive sample, division by an exact zero
// sample, negative power of zero) name the offending index.
GenScalar eval(const ExprPtr& e, const GridPtr& grid);

// eval + validation that every sample is exactly 0 or 1.
Idempotent eval_mask(const ExprPtr& e, const GridPtr& grid);

// parse + eval in one step.
GenScalar eval_scalar(std::string_view source, const GridPtr& grid);

} // namespace gna
