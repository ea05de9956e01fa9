#pragma once

// Test-only oracles, deliberately independent of the leanevo parser and
// printer internals: exact rational evaluation of expression trees, a
// reference-precedence string evaluator, truth-table evaluation, and small
// random AST generators.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leanevo/ast.hpp"
#include "leanevo/rng.hpp"

namespace oracle {

using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;
using leanevo::BinOp;
using leanevo::Expr;
using leanevo::ExprPtr;
using leanevo::RelOp;
using leanevo::UnOp;

using RatEnv = std::map<std::string, Rat>;
using BoolEnv = std::map<std::string, bool>;

inline std::optional<Rat> parse_literal(const std::string& text) {
  // integer or decimal literal
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rat(Int(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  Int denom = 1;
  for (std::size_t i = 0; i < text.size() - dot - 1; ++i) denom *= 10;
  return Rat(Int(digits), denom);
}

inline std::optional<Rat> eval_arith(const ExprPtr& e, const RatEnv& env) {
  if (!e) return std::nullopt;
  switch (e->kind) {
    case Expr::Kind::Num:
      return parse_literal(e->name);
    case Expr::Kind::Ident: {
      auto it = env.find(e->name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case Expr::Kind::Unary: {
      if (e->uop != UnOp::Neg) return std::nullopt;
      auto v = eval_arith(e->operand(), env);
      if (!v) return std::nullopt;
      return -*v;
    }
    case Expr::Kind::Binary: {
      auto l = eval_arith(e->lhs(), env);
      auto r = eval_arith(e->rhs(), env);
      if (!l || !r) return std::nullopt;
      switch (e->bop) {
        case BinOp::Add: return *l + *r;
        case BinOp::Sub: return *l - *r;
        case BinOp::Mul: return *l * *r;
        case BinOp::Div:
          if (*r == 0) return std::nullopt;
          return *l / *r;
        case BinOp::Pow: {
          if (boost::multiprecision::denominator(*r) != 1) return std::nullopt;
          Int exp = boost::multiprecision::numerator(*r);
          if (exp < 0 || exp > 64) return std::nullopt;
          Rat acc = 1;
          for (Int i = 0; i < exp; ++i) acc *= *l;
          return acc;
        }
        default: return std::nullopt;
      }
    }
    default:
      return std::nullopt;
  }
}

inline std::optional<bool> eval_prop(const ExprPtr& e, const RatEnv& renv, const BoolEnv& benv) {
  if (!e) return std::nullopt;
  switch (e->kind) {
    case Expr::Kind::Ident: {
      auto it = benv.find(e->name);
      if (it == benv.end()) return std::nullopt;
      return it->second;
    }
    case Expr::Kind::Unary: {
      if (e->uop != UnOp::Not) return std::nullopt;
      auto v = eval_prop(e->operand(), renv, benv);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Expr::Kind::Binary: {
      switch (e->bop) {
        case BinOp::And:
        case BinOp::Or:
        case BinOp::Imp:
        case BinOp::Iff: {
          auto l = eval_prop(e->lhs(), renv, benv);
          auto r = eval_prop(e->rhs(), renv, benv);
          if (!l || !r) return std::nullopt;
          if (e->bop == BinOp::And) return *l && *r;
          if (e->bop == BinOp::Or) return *l || *r;
          if (e->bop == BinOp::Imp) return !*l || *r;
          return *l == *r;
        }
        case BinOp::Dvd: {
          auto l = eval_arith(e->lhs(), renv);
          auto r = eval_arith(e->rhs(), renv);
          if (!l || !r || *l == 0) return std::nullopt;
          if (boost::multiprecision::denominator(*l) != 1 ||
              boost::multiprecision::denominator(*r) != 1) {
            return std::nullopt;
          }
          return boost::multiprecision::numerator(*r) %
                     boost::multiprecision::numerator(*l) == 0;
        }
        default:
          return std::nullopt;
      }
    }
    case Expr::Kind::Relation: {
      auto l = eval_arith(e->lhs(), renv);
      auto r = eval_arith(e->rhs(), renv);
      if (!l || !r) return std::nullopt;
      switch (e->rel) {
        case RelOp::Eq: return *l == *r;
        case RelOp::Ne: return *l != *r;
        case RelOp::Lt: return *l < *r;
        case RelOp::Le: return *l <= *r;
        case RelOp::Gt: return *l > *r;
        case RelOp::Ge: return *l >= *r;
        case RelOp::Mem: return std::nullopt;
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

// Reference-precedence evaluator over a printed arithmetic string.
// Independent reimplementation: ^ > unary - > * / > + -; ^ right
// associative, * / + - left associative; identifiers from env.
class StringEval {
 public:
  StringEval(const std::string& text, const RatEnv& env) : s_(text), env_(env) {}

  std::optional<Rat> run() {
    auto v = expr(0);
    skip();
    if (pos_ != s_.size()) return std::nullopt;
    return v;
  }

 private:
  const std::string& s_;
  const RatEnv& env_;
  std::size_t pos_{0};

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  std::optional<Rat> expr(int min_prec) {
    std::optional<Rat> lhs = prefix();
    if (!lhs) return std::nullopt;
    for (;;) {
      char c = peek();
      int prec;
      bool right = false;
      if (c == '+' || c == '-') {
        prec = 1;
      } else if (c == '*' || c == '/') {
        prec = 2;
      } else if (c == '^') {
        prec = 4;
        right = true;
      } else {
        break;
      }
      if (prec < min_prec) break;
      ++pos_;
      auto rhs = expr(right ? prec : prec + 1);
      if (!rhs) return std::nullopt;
      switch (c) {
        case '+': *lhs += *rhs; break;
        case '-': *lhs -= *rhs; break;
        case '*': *lhs *= *rhs; break;
        case '/':
          if (*rhs == 0) return std::nullopt;
          *lhs /= *rhs;
          break;
        case '^': {
          if (boost::multiprecision::denominator(*rhs) != 1) return std::nullopt;
          Int exp = boost::multiprecision::numerator(*rhs);
          if (exp < 0 || exp > 64) return std::nullopt;
          Rat acc = 1;
          for (Int i = 0; i < exp; ++i) acc *= *lhs;
          *lhs = acc;
          break;
        }
      }
    }
    return lhs;
  }

  std::optional<Rat> prefix() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      auto v = expr(3);  // unary minus binds between * and ^
      if (!v) return std::nullopt;
      return -*v;
    }
    if (c == '(') {
      ++pos_;
      auto v = expr(0);
      if (peek() != ')') return std::nullopt;
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ + 1 < s_.size() && s_[pos_] == '.' &&
          std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      return parse_literal(s_.substr(start, pos_ - start));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      auto it = env_.find(s_.substr(start, pos_ - start));
      if (it == env_.end()) return std::nullopt;
      return it->second;
    }
    return std::nullopt;
  }
};

// --- random generators -----------------------------------------------------

// Arithmetic tree of bounded depth over the given variables. `^` only
// appears applied to a leaf with exponent 2 or 3, keeping values small.
inline ExprPtr gen_arith(leanevo::Rng& rng, int depth, const std::vector<std::string>& vars,
                         const std::vector<BinOp>& ops) {
  if (depth <= 0 || rng.pick(4) == 0) {
    switch (rng.pick(3)) {
      case 0: return Expr::num(std::to_string(rng.pick(5)));
      case 1: return Expr::ident(vars[rng.pick(vars.size())]);
      default: {
        ExprPtr leaf = Expr::ident(vars[rng.pick(vars.size())]);
        if (rng.pick(2) == 0) {
          return Expr::binary(BinOp::Pow, leaf, Expr::num(rng.pick(2) == 0 ? "2" : "3"));
        }
        return leaf;
      }
    }
  }
  BinOp op = ops[rng.pick(ops.size())];
  return Expr::binary(op, gen_arith(rng, depth - 1, vars, ops),
                      gen_arith(rng, depth - 1, vars, ops));
}

// Propositional tree over up to three atoms with ¬/∧/∨ (the shapes the
// logic rules rewrite).
inline ExprPtr gen_prop(leanevo::Rng& rng, int depth, const std::vector<std::string>& atoms) {
  if (depth <= 0 || rng.pick(4) == 0) {
    ExprPtr atom = Expr::ident(atoms[rng.pick(atoms.size())]);
    return rng.pick(3) == 0 ? Expr::unary(UnOp::Not, atom) : atom;
  }
  switch (rng.pick(3)) {
    case 0: return Expr::unary(UnOp::Not, gen_prop(rng, depth - 1, atoms));
    case 1:
      return Expr::binary(BinOp::And, gen_prop(rng, depth - 1, atoms),
                          gen_prop(rng, depth - 1, atoms));
    default:
      return Expr::binary(BinOp::Or, gen_prop(rng, depth - 1, atoms),
                          gen_prop(rng, depth - 1, atoms));
  }
}

inline Rat random_rational(leanevo::Rng& rng) {
  long long num = static_cast<long long>(rng.pick(9)) - 4;  // -4..4
  long long den = 1 + static_cast<long long>(rng.pick(3));  // 1..3
  return Rat(num, den);
}

// True on every assignment of the atoms (exhaustive truth table).
inline bool tautologically_equal(const ExprPtr& a, const ExprPtr& b,
                                 const std::vector<std::string>& atoms) {
  std::size_t n = atoms.size();
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    BoolEnv env;
    for (std::size_t i = 0; i < n; ++i) env[atoms[i]] = (mask >> i) & 1;
    auto va = eval_prop(a, {}, env);
    auto vb = eval_prop(b, {}, env);
    if (!va || !vb || *va != *vb) return false;
  }
  return true;
}

}  // namespace oracle
