#include "leanevo/printer.hpp"

#include <sstream>

#include "prec.hpp"

namespace leanevo {

namespace {

using detail::Assoc;

// Precedence of a node as a child operand; parens are required when it
// binds looser than the context demands.
int node_prec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
      return detail::binop_info(e.bop).prec;
    case Expr::Kind::Unary:
      return e.uop == UnOp::Not ? detail::kPrecNot : detail::kPrecNeg;
    case Expr::Kind::Relation:
      return detail::kPrecRel;
    case Expr::Kind::Quantifier:
      return detail::kPrecQuant;
    case Expr::Kind::App:
      return e.is_integral() ? detail::kPrecIntegral : detail::kPrecApp;
    case Expr::Kind::Ident:
    case Expr::Kind::Num:
      return detail::kPrecAtom;
  }
  return detail::kPrecAtom;
}

void print_rec(std::ostream& os, const Expr& e, int min_prec);

void print_child(std::ostream& os, const Expr& child, int required) {
  if (node_prec(child) < required) {
    os << '(';
    print_rec(os, child, 0);
    os << ')';
  } else {
    print_rec(os, child, required);
  }
}

void print_binder_group(std::ostream& os, const QuantBinder& b) {
  for (std::size_t i = 0; i < b.names.size(); ++i) {
    if (i) os << ' ';
    os << b.names[i];
  }
  if (b.type) {
    os << " : ";
    print_rec(os, *b.type, 0);
  } else if (b.domain) {
    os << " ∈ ";
    print_child(os, *b.domain, detail::kPrecRel + 1);
  }
}

void print_rec(std::ostream& os, const Expr& e, int /*min_prec*/) {
  switch (e.kind) {
    case Expr::Kind::Ident:
    case Expr::Kind::Num:
      os << e.name;
      return;
    case Expr::Kind::Binary: {
      auto info = detail::binop_info(e.bop);
      int lhs_req = info.assoc == Assoc::Left ? info.prec : info.prec + 1;
      int rhs_req = info.assoc == Assoc::Right ? info.prec : info.prec + 1;
      print_child(os, *e.lhs(), lhs_req);
      // `^` prints tight per Lean convention; all other operators spaced
      if (e.bop == BinOp::Pow) {
        os << detail::binop_symbol(e.bop);
      } else {
        os << ' ' << detail::binop_symbol(e.bop) << ' ';
      }
      print_child(os, *e.rhs(), rhs_req);
      return;
    }
    case Expr::Kind::Unary: {
      if (e.uop == UnOp::Not) {
        os << "¬";
        print_child(os, *e.operand(), detail::kPrecNot);
      } else {
        os << '-';
        print_child(os, *e.operand(), detail::kPrecNeg);
      }
      return;
    }
    case Expr::Kind::Relation: {
      print_child(os, *e.lhs(), detail::kPrecRel + 1);
      os << ' ' << detail::relop_symbol(e.rel) << ' ';
      print_child(os, *e.rhs(), detail::kPrecRel + 1);
      return;
    }
    case Expr::Kind::Quantifier: {
      os << (e.quant == QuantKind::Forall ? "∀ " : "∃ ");
      print_binder_group(os, e.binder);
      os << ", ";
      print_rec(os, *e.body(), 0);
      return;
    }
    case Expr::Kind::App: {
      if (e.is_integral()) {
        os << Expr::kIntegralHead << ' ' << e.args[0]->name << " in ";
        print_child(os, *e.args[1], detail::kPrecRel + 1);
        os << "..";
        print_child(os, *e.args[2], detail::kPrecRel + 1);
        os << ", ";
        print_child(os, *e.args[3], detail::kPrecIntegral);
        return;
      }
      os << e.name;
      for (const auto& arg : e.args) {
        os << ' ';
        print_child(os, *arg, detail::kPrecAtom);
      }
      return;
    }
  }
}

}  // namespace

std::string print_expr(const Expr& expr) {
  std::ostringstream os;
  print_rec(os, expr, 0);
  return os.str();
}

std::string print_expr(const ExprPtr& expr) {
  return expr ? print_expr(*expr) : std::string();
}

std::string print_statement(const Statement& stmt) {
  std::ostringstream os;
  if (!stmt.header.empty()) {
    os << stmt.header;
    if (stmt.header.back() != '\n') os << '\n';
  }
  os << "theorem " << stmt.name;
  for (const auto& b : stmt.binders) {
    os << ' ' << (b.implicit ? '{' : '(');
    for (std::size_t i = 0; i < b.names.size(); ++i) {
      if (i) os << ' ';
      os << b.names[i];
    }
    os << " : ";
    print_rec(os, *b.type, 0);
    os << (b.implicit ? '}' : ')');
  }
  for (const auto& h : stmt.hypotheses) {
    os << " (" << h.label << " : ";
    print_rec(os, *h.prop, 0);
    os << ')';
  }
  os << " : ";
  print_rec(os, *stmt.goal, 0);
  os << ' ' << stmt.trailer;
  return os.str();
}

}  // namespace leanevo
