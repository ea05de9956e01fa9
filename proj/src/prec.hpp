#pragma once

#include "leanevo/ast.hpp"

namespace leanevo::detail {

// Binding powers, tightest last. Mirrors Lean 4 conventions for the
// supported subset: ^ > unary - > *,/ > +,- > relations > ¬ > ∧ > ∨ > → > ↔.
enum Prec : int {
  kPrecQuant = 8,      // quantifier bodies extend maximally
  kPrecIff = 10,
  kPrecImp = 20,
  kPrecOr = 30,
  kPrecAnd = 40,
  kPrecNot = 50,
  kPrecRel = 60,       // relations and ∣, non-associative
  kPrecIntegral = 61,  // integral body stops before relations
  kPrecAdd = 70,
  kPrecMul = 80,
  kPrecNeg = 90,
  kPrecPow = 100,
  kPrecApp = 110,
  kPrecAtom = 120,
};

enum class Assoc { Left, Right, None };

struct OpInfo {
  int prec;
  Assoc assoc;
};

inline OpInfo binop_info(BinOp op) {
  switch (op) {
    case BinOp::Add:
    case BinOp::Sub: return {kPrecAdd, Assoc::Left};
    case BinOp::Mul:
    case BinOp::Div: return {kPrecMul, Assoc::Left};
    case BinOp::SMul: return {kPrecMul, Assoc::Right};
    case BinOp::Pow: return {kPrecPow, Assoc::Right};
    case BinOp::And: return {kPrecAnd, Assoc::Right};
    case BinOp::Or: return {kPrecOr, Assoc::Right};
    case BinOp::Imp: return {kPrecImp, Assoc::Right};
    case BinOp::Iff: return {kPrecIff, Assoc::Right};
    case BinOp::Dvd: return {kPrecRel, Assoc::None};
  }
  return {kPrecAtom, Assoc::None};
}

inline const char* binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Pow: return "^";
    case BinOp::SMul: return "•";
    case BinOp::And: return "∧";
    case BinOp::Or: return "∨";
    case BinOp::Imp: return "→";
    case BinOp::Iff: return "↔";
    case BinOp::Dvd: return "∣";
  }
  return "?";
}

inline const char* relop_symbol(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Ne: return "≠";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "≤";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return "≥";
    case RelOp::Mem: return "∈";
  }
  return "?";
}

}  // namespace leanevo::detail
