#include "leanevo/ast.hpp"

#include <stdexcept>
#include <utility>

namespace leanevo {

namespace {

ExprPtr make(Expr&& e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

ExprPtr Expr::binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  Expr e;
  e.kind = Kind::Binary;
  e.bop = op;
  e.args = {std::move(lhs), std::move(rhs)};
  return make(std::move(e));
}

ExprPtr Expr::unary(UnOp op, ExprPtr operand) {
  Expr e;
  e.kind = Kind::Unary;
  e.uop = op;
  e.args = {std::move(operand)};
  return make(std::move(e));
}

ExprPtr Expr::relation(RelOp op, ExprPtr lhs, ExprPtr rhs) {
  Expr e;
  e.kind = Kind::Relation;
  e.rel = op;
  e.args = {std::move(lhs), std::move(rhs)};
  return make(std::move(e));
}

ExprPtr Expr::quantifier(QuantKind kind, QuantBinder binder, ExprPtr body) {
  Expr e;
  e.kind = Kind::Quantifier;
  e.quant = kind;
  e.binder = std::move(binder);
  e.args = {std::move(body)};
  return make(std::move(e));
}

ExprPtr Expr::app(std::string head, std::vector<ExprPtr> args) {
  Expr e;
  e.kind = Kind::App;
  e.name = std::move(head);
  e.args = std::move(args);
  return make(std::move(e));
}

ExprPtr Expr::ident(std::string name) {
  Expr e;
  e.kind = Kind::Ident;
  e.name = std::move(name);
  return make(std::move(e));
}

ExprPtr Expr::num(std::string literal) {
  Expr e;
  e.kind = Kind::Num;
  e.name = std::move(literal);
  return make(std::move(e));
}

ExprPtr Expr::integral(std::string var, ExprPtr lo, ExprPtr hi, ExprPtr body) {
  return app(kIntegralHead,
             {ident(std::move(var)), std::move(lo), std::move(hi), std::move(body)});
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Binary:
      if (a.bop != b.bop) return false;
      break;
    case Expr::Kind::Unary:
      if (a.uop != b.uop) return false;
      break;
    case Expr::Kind::Relation:
      if (a.rel != b.rel) return false;
      break;
    case Expr::Kind::Quantifier: {
      if (a.quant != b.quant || a.binder.names != b.binder.names) return false;
      if (!expr_equal(a.binder.type, b.binder.type)) return false;
      if (!expr_equal(a.binder.domain, b.binder.domain)) return false;
      break;
    }
    case Expr::Kind::App:
    case Expr::Kind::Ident:
    case Expr::Kind::Num:
      if (a.name != b.name) return false;
      break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!expr_equal(a.args[i], b.args[i])) return false;
  }
  return true;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return expr_equal(*a, *b);
}

const ExprPtr& node_at(const ExprPtr& root, const std::vector<int>& path) {
  const ExprPtr* cur = &root;
  for (int idx : path) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= (*cur)->args.size()) {
      throw std::out_of_range("node_at: path leaves the tree");
    }
    cur = &(*cur)->args[static_cast<std::size_t>(idx)];
  }
  return *cur;
}

ExprPtr replace_at(const ExprPtr& root, const std::vector<int>& path, const ExprPtr& replacement) {
  if (path.empty()) return replacement;
  int idx = path.front();
  if (idx < 0 || static_cast<std::size_t>(idx) >= root->args.size()) {
    throw std::out_of_range("replace_at: path leaves the tree");
  }
  Expr copy = *root;
  std::vector<int> rest(path.begin() + 1, path.end());
  copy.args[static_cast<std::size_t>(idx)] =
      replace_at(root->args[static_cast<std::size_t>(idx)], rest, replacement);
  return std::make_shared<const Expr>(std::move(copy));
}

std::vector<std::string> Statement::binder_names() const {
  std::vector<std::string> out;
  for (const auto& b : binders) {
    out.insert(out.end(), b.names.begin(), b.names.end());
  }
  return out;
}

std::string ParseError::message() const {
  return "parse error at line " + std::to_string(position.line) + ", column " +
         std::to_string(position.column) + ": expected " + expected + ", found " + found;
}

const std::set<std::string>& default_constants() {
  static const std::set<std::string> table = {
      // type names
      "ℝ", "ℕ", "ℤ", "ℚ", "ℂ",  // ℝ ℕ ℤ ℚ ℂ
      "Prop", "True", "False",
      // common mathlib heads that appear undotted
      "dist", "deriv", "Continuous", "ContinuousOn", "EuclideanSpace", "Fin",
      "Matrix", "Polynomial", "Finset", "Function",
  };
  return table;
}

const std::set<std::string>& default_type_heads() {
  static const std::set<std::string> table = {
      "Fin", "EuclideanSpace", "Set", "Finset", "Matrix", "Polynomial",
      "Vector", "Subgroup", "Ideal",
  };
  return table;
}

bool is_constant_name(const std::string& name, const std::set<std::string>& constants) {
  if (name.find('.') != std::string::npos) return true;
  return constants.count(name) > 0;
}

namespace {

void collect_free(const ExprPtr& e, const std::set<std::string>& constants,
                  std::vector<std::string>& bound, std::set<std::string>& out) {
  if (!e) return;
  switch (e->kind) {
    case Expr::Kind::Ident: {
      const std::string& n = e->name;
      if (is_constant_name(n, constants)) return;
      for (const auto& b : bound) {
        if (b == n) return;
      }
      out.insert(n);
      return;
    }
    case Expr::Kind::Num:
      return;
    case Expr::Kind::Quantifier: {
      collect_free(e->binder.type, constants, bound, out);
      collect_free(e->binder.domain, constants, bound, out);
      std::size_t mark = bound.size();
      for (const auto& n : e->binder.names) bound.push_back(n);
      collect_free(e->body(), constants, bound, out);
      bound.resize(mark);
      return;
    }
    case Expr::Kind::App: {
      if (e->is_integral()) {
        // args: [var, lo, hi, body]; the variable is bound in the body
        collect_free(e->args[1], constants, bound, out);
        collect_free(e->args[2], constants, bound, out);
        std::size_t mark = bound.size();
        bound.push_back(e->args[0]->name);
        collect_free(e->args[3], constants, bound, out);
        bound.resize(mark);
        return;
      }
      const std::string& head = e->name;
      if (!is_constant_name(head, constants)) {
        bool is_bound = false;
        for (const auto& b : bound) {
          if (b == head) {
            is_bound = true;
            break;
          }
        }
        if (!is_bound) out.insert(head);
      }
      for (const auto& a : e->args) collect_free(a, constants, bound, out);
      return;
    }
    default:
      for (const auto& a : e->args) collect_free(a, constants, bound, out);
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const ExprPtr& expr) {
  return free_vars(expr, default_constants());
}

std::set<std::string> free_vars(const ExprPtr& expr, const std::set<std::string>& constants) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(expr, constants, bound, out);
  return out;
}

bool proposition_shaped(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Relation:
    case Expr::Kind::Quantifier:
      return true;
    case Expr::Kind::Binary:
      return e.bop == BinOp::And || e.bop == BinOp::Or || e.bop == BinOp::Imp ||
             e.bop == BinOp::Iff || e.bop == BinOp::Dvd;
    case Expr::Kind::Unary:
      return e.uop == UnOp::Not;
    case Expr::Kind::App:
    case Expr::Kind::Ident:
      return true;  // opaque; caller decides with context
    case Expr::Kind::Num:
      return false;
  }
  return false;
}

}  // namespace leanevo
