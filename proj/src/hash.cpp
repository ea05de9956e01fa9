#include "leanevo/hash.hpp"

#include <map>
#include <vector>

#include "leanevo/printer.hpp"

namespace leanevo {

namespace {

// Scoped rename map. Replacement names use '$', which cannot occur in a
// parsed identifier, so captures are impossible.
struct Renamer {
  std::vector<std::pair<std::string, std::string>> scope;
  int quant_counter{0};

  const std::string* lookup(const std::string& name) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->first == name) return &it->second;
    }
    return nullptr;
  }

  ExprPtr rename(const ExprPtr& e) {
    if (!e) return e;
    switch (e->kind) {
      case Expr::Kind::Ident: {
        if (const std::string* r = lookup(e->name)) return Expr::ident(*r);
        return e;
      }
      case Expr::Kind::Num:
        return e;
      case Expr::Kind::Quantifier: {
        QuantBinder b;
        b.type = rename(e->binder.type);
        b.domain = rename(e->binder.domain);
        std::size_t mark = scope.size();
        for (const auto& n : e->binder.names) {
          std::string fresh = "$q" + std::to_string(quant_counter++);
          scope.emplace_back(n, fresh);
          b.names.push_back(std::move(fresh));
        }
        ExprPtr body = rename(e->body());
        scope.resize(mark);
        return Expr::quantifier(e->quant, std::move(b), body);
      }
      case Expr::Kind::App: {
        if (e->is_integral()) {
          ExprPtr lo = rename(e->args[1]);
          ExprPtr hi = rename(e->args[2]);
          std::string fresh = "$q" + std::to_string(quant_counter++);
          std::size_t mark = scope.size();
          scope.emplace_back(e->args[0]->name, fresh);
          ExprPtr body = rename(e->args[3]);
          scope.resize(mark);
          return Expr::integral(std::move(fresh), lo, hi, body);
        }
        std::string head = e->name;
        if (const std::string* r = lookup(head)) head = *r;
        std::vector<ExprPtr> args;
        args.reserve(e->args.size());
        for (const auto& a : e->args) args.push_back(rename(a));
        return Expr::app(std::move(head), std::move(args));
      }
      default: {
        Expr copy = *e;
        for (auto& a : copy.args) a = rename(a);
        return std::make_shared<const Expr>(std::move(copy));
      }
    }
  }
};

}  // namespace

std::string normalized_print(const Statement& stmt) {
  Renamer rn;
  Statement norm;
  norm.name = "$thm";
  int counter = 0;
  for (const auto& b : stmt.binders) {
    Binder nb;
    nb.implicit = b.implicit;
    for (const auto& n : b.names) {
      std::string fresh = "$b" + std::to_string(counter++);
      rn.scope.emplace_back(n, fresh);
      nb.names.push_back(std::move(fresh));
    }
    norm.binders.push_back(std::move(nb));
  }
  // binder types may reference earlier binders; rename after scoping
  for (std::size_t i = 0; i < stmt.binders.size(); ++i) {
    norm.binders[i].type = rn.rename(stmt.binders[i].type);
  }
  int hcounter = 0;
  for (const auto& h : stmt.hypotheses) {
    std::string fresh = "$h" + std::to_string(hcounter++);
    rn.scope.emplace_back(h.label, fresh);
    norm.hypotheses.push_back(Hypothesis{fresh, nullptr});
  }
  for (std::size_t i = 0; i < stmt.hypotheses.size(); ++i) {
    norm.hypotheses[i].prop = rn.rename(stmt.hypotheses[i].prop);
  }
  norm.goal = rn.rename(stmt.goal);
  norm.trailer = stmt.trailer;
  return print_statement(norm);
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t structural_hash(const Statement& stmt) {
  return fnv1a(normalized_print(stmt));
}

std::uint64_t whitespace_normalized_hash(std::string_view text) {
  std::string norm;
  norm.reserve(text.size());
  bool in_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      in_space = true;
      continue;
    }
    if (in_space && !norm.empty()) norm.push_back(' ');
    in_space = false;
    norm.push_back(c);
  }
  return fnv1a(norm);
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace leanevo
