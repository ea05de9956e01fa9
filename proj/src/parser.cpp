#include "leanevo/parser.hpp"

#include <algorithm>
#include <cctype>

#include "lexer.hpp"
#include "prec.hpp"

namespace leanevo {

namespace {

using detail::Token;
using detail::TokKind;

struct ParseAbort {
  ParseError err;
};

[[noreturn]] void fail(const Token& tok, std::string expected) {
  throw ParseAbort{ParseError{tok.pos, std::move(expected), tok.text}};
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& opts)
      : tokens_(std::move(tokens)), opts_(opts) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(idx_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& next() {
    const Token& t = tokens_[idx_];
    if (idx_ + 1 < tokens_.size()) ++idx_;
    return t;
  }
  bool at(TokKind k) const { return peek().kind == k; }
  const Token& expect(TokKind k, const char* what) {
    if (!at(k)) fail(peek(), what);
    return next();
  }

  ExprPtr parse_expr(int min_prec) {
    ExprPtr lhs = parse_prefix();
    for (;;) {
      const Token& tok = peek();
      RelOp rel;
      if (infix_relation(tok.kind, rel)) {
        if (detail::kPrecRel < min_prec) break;
        next();
        ExprPtr rhs = parse_expr(detail::kPrecRel + 1);
        lhs = Expr::relation(rel, lhs, rhs);
        if (is_relation_start(peek().kind)) fail(peek(), "end of relation (relations do not chain)");
        continue;
      }
      BinOp bop;
      if (infix_binop(tok.kind, bop)) {
        auto info = detail::binop_info(bop);
        if (info.prec < min_prec) break;
        next();
        if (bop == BinOp::Dvd) {
          ExprPtr rhs = parse_expr(detail::kPrecRel + 1);
          lhs = Expr::binary(bop, lhs, rhs);
          if (is_relation_start(peek().kind)) fail(peek(), "end of relation (relations do not chain)");
          continue;
        }
        int rhs_min = info.assoc == detail::Assoc::Left ? info.prec + 1 : info.prec;
        ExprPtr rhs = parse_expr(rhs_min);
        lhs = Expr::binary(bop, lhs, rhs);
        continue;
      }
      break;
    }
    return lhs;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t idx_{0};
  const ParseOptions& opts_;

  static bool infix_relation(TokKind k, RelOp& out) {
    switch (k) {
      case TokKind::Eq: out = RelOp::Eq; return true;
      case TokKind::Ne: out = RelOp::Ne; return true;
      case TokKind::Lt: out = RelOp::Lt; return true;
      case TokKind::Le: out = RelOp::Le; return true;
      case TokKind::Gt: out = RelOp::Gt; return true;
      case TokKind::Ge: out = RelOp::Ge; return true;
      case TokKind::Mem: out = RelOp::Mem; return true;
      default: return false;
    }
  }

  static bool infix_binop(TokKind k, BinOp& out) {
    switch (k) {
      case TokKind::Plus: out = BinOp::Add; return true;
      case TokKind::Minus: out = BinOp::Sub; return true;
      case TokKind::Star: out = BinOp::Mul; return true;
      case TokKind::Slash: out = BinOp::Div; return true;
      case TokKind::Caret: out = BinOp::Pow; return true;
      case TokKind::SMul: out = BinOp::SMul; return true;
      case TokKind::And: out = BinOp::And; return true;
      case TokKind::Or: out = BinOp::Or; return true;
      case TokKind::Arrow: out = BinOp::Imp; return true;
      case TokKind::Iff: out = BinOp::Iff; return true;
      case TokKind::Dvd: out = BinOp::Dvd; return true;
      default: return false;
    }
  }

  static bool is_relation_start(TokKind k) {
    RelOp r;
    return infix_relation(k, r) || k == TokKind::Dvd;
  }

  static bool is_atom_start(TokKind k) {
    return k == TokKind::Ident || k == TokKind::Number || k == TokKind::LParen;
  }

  ExprPtr parse_prefix() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokKind::Not:
        next();
        return Expr::unary(UnOp::Not, parse_expr(detail::kPrecNot));
      case TokKind::Minus:
        next();
        return Expr::unary(UnOp::Neg, parse_expr(detail::kPrecNeg));
      case TokKind::Forall:
        next();
        return parse_quantifier(QuantKind::Forall);
      case TokKind::Exists:
        next();
        return parse_quantifier(QuantKind::Exists);
      case TokKind::Integral:
        next();
        return parse_integral();
      case TokKind::LParen: {
        next();
        ExprPtr e = parse_expr(0);
        expect(TokKind::RParen, "')'");
        return e;
      }
      case TokKind::Number:
        return Expr::num(next().text);
      case TokKind::Ident: {
        std::string head = next().text;
        std::vector<ExprPtr> args;
        while (is_atom_start(peek().kind)) {
          args.push_back(parse_atom());
        }
        if (args.empty()) return Expr::ident(std::move(head));
        return Expr::app(std::move(head), std::move(args));
      }
      default:
        fail(tok, "expression");
    }
  }

  ExprPtr parse_atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokKind::Ident:
        return Expr::ident(next().text);
      case TokKind::Number:
        return Expr::num(next().text);
      case TokKind::LParen: {
        next();
        ExprPtr e = parse_expr(0);
        expect(TokKind::RParen, "')'");
        return e;
      }
      default:
        fail(tok, "atom");
    }
  }

  // After the ∀/∃ token. Parenthesized groups nest:
  // `∀ (x : ℝ) (y : ℕ), P` becomes two nested quantifiers.
  ExprPtr parse_quantifier(QuantKind kind) {
    bool parens = false;
    if (at(TokKind::LParen)) {
      parens = true;
      next();
    }
    QuantBinder binder;
    binder.names.push_back(expect(TokKind::Ident, "binder name").text);
    while (at(TokKind::Ident)) {
      binder.names.push_back(next().text);
    }
    if (at(TokKind::Colon)) {
      next();
      binder.type = parse_expr(0);
    } else if (at(TokKind::Mem)) {
      next();
      binder.domain = parse_expr(detail::kPrecRel + 1);
    }
    if (parens) expect(TokKind::RParen, "')'");

    if (parens && at(TokKind::LParen)) {
      ExprPtr body = parse_quantifier(kind);
      return Expr::quantifier(kind, std::move(binder), body);
    }
    expect(TokKind::Comma, "','");
    ExprPtr body = parse_expr(0);
    return Expr::quantifier(kind, std::move(binder), body);
  }

  // `∫ x in lo..hi, body`; body stops before relational operators.
  ExprPtr parse_integral() {
    std::string var = expect(TokKind::Ident, "integration variable").text;
    const Token& kw = expect(TokKind::Ident, "'in'");
    if (kw.text != "in") fail(kw, "'in'");
    ExprPtr lo = parse_expr(detail::kPrecRel + 1);
    expect(TokKind::DotDot, "'..'");
    ExprPtr hi = parse_expr(detail::kPrecRel + 1);
    expect(TokKind::Comma, "','");
    ExprPtr body = parse_expr(detail::kPrecIntegral);
    return Expr::integral(std::move(var), lo, hi, body);
  }

 public:
  // Statement-level pieces ------------------------------------------------

  struct Group {
    std::vector<std::string> names;
    ExprPtr body;
    bool implicit{false};
    SourcePos pos;
  };

  Statement parse_theorem(const ParseOptions& opts, std::string header) {
    const Token& kw = expect(TokKind::Ident, "'theorem'");
    if (kw.text != "theorem" && kw.text != "lemma") fail(kw, "'theorem'");
    Statement stmt;
    stmt.header = std::move(header);
    stmt.name = expect(TokKind::Ident, "theorem name").text;

    std::vector<Group> groups;
    while (at(TokKind::LParen) || at(TokKind::LBrace)) {
      groups.push_back(parse_group());
    }
    expect(TokKind::Colon, "':'");
    stmt.goal = parse_expr(0);
    expect(TokKind::Assign, "':='");

    classify_groups(stmt, groups, opts);
    if (opts.strict_idents) check_idents(stmt, opts);
    return stmt;
  }

 private:
  Group parse_group() {
    Group g;
    g.pos = peek().pos;
    g.implicit = at(TokKind::LBrace);
    next();
    g.names.push_back(expect(TokKind::Ident, "binder name").text);
    while (at(TokKind::Ident) || at(TokKind::Comma)) {
      if (at(TokKind::Comma)) {
        next();
        continue;
      }
      g.names.push_back(next().text);
    }
    expect(TokKind::Colon, "':'");
    g.body = parse_expr(0);
    expect(g.implicit ? TokKind::RBrace : TokKind::RParen, g.implicit ? "'}'" : "')'");
    return g;
  }

  void classify_groups(Statement& stmt, const std::vector<Group>& groups,
                       const ParseOptions& opts) {
    std::set<std::string> declared;
    std::set<std::string> labels;
    for (const Group& g : groups) {
      bool is_hyp = !g.implicit && group_is_hypothesis(g, declared, opts);
      if (is_hyp) {
        for (const auto& n : g.names) {
          if (!labels.insert(n).second) {
            throw ParseAbort{ParseError{g.pos, "unique hypothesis label", n}};
          }
          stmt.hypotheses.push_back(Hypothesis{n, g.body});
        }
      } else {
        stmt.binders.push_back(Binder{g.names, g.body, g.implicit});
      }
      declared.insert(g.names.begin(), g.names.end());
    }
  }

  bool group_is_hypothesis(const Group& g, const std::set<std::string>& declared,
                           const ParseOptions& opts) const {
    const Expr& e = *g.body;
    switch (e.kind) {
      case Expr::Kind::Relation:
      case Expr::Kind::Quantifier:
        return true;
      case Expr::Kind::Unary:
        return e.uop == UnOp::Not;
      case Expr::Kind::Binary:
        if (e.bop == BinOp::And || e.bop == BinOp::Or || e.bop == BinOp::Iff ||
            e.bop == BinOp::Dvd) {
          return true;
        }
        break;
      case Expr::Kind::App:
        if (opts.type_heads.count(e.name)) return false;
        break;
      default:
        break;
    }
    // Ambiguous shapes (→, applications, plain identifiers): a reference to
    // an earlier binder or label marks an assumption; otherwise it is a type.
    auto fv = free_vars(g.body, opts.constants);
    for (const auto& v : fv) {
      if (declared.count(v)) return true;
    }
    return false;
  }

  void check_idents(const Statement& stmt, const ParseOptions& opts) const {
    std::set<std::string> declared;
    for (const auto& b : stmt.binders) declared.insert(b.names.begin(), b.names.end());
    for (const auto& h : stmt.hypotheses) declared.insert(h.label);
    auto check = [&](const ExprPtr& e) {
      for (const auto& v : free_vars(e, opts.constants)) {
        if (!declared.count(v)) {
          throw ParseAbort{ParseError{SourcePos{}, "known identifier", v}};
        }
      }
    };
    for (const auto& h : stmt.hypotheses) check(h.prop);
    check(stmt.goal);
  }
};

// Splits off leading blank lines, comments, and import/open lines.
// Returns the byte offset where the declaration starts.
std::size_t header_end(std::string_view src) {
  std::size_t pos = 0;
  while (pos < src.size()) {
    std::size_t line_start = pos;
    std::size_t i = pos;
    while (i < src.size() && (src[i] == ' ' || src[i] == '\t')) ++i;
    if (i >= src.size()) return line_start;
    if (src[i] == '\n' || src[i] == '\r') {
      pos = i + 1;
      if (src[i] == '\r' && pos < src.size() && src[pos] == '\n') ++pos;
      continue;
    }
    std::string_view rest = src.substr(i);
    if (rest.substr(0, 2) == "--") {
      std::size_t eol = src.find('\n', i);
      if (eol == std::string_view::npos) return src.size();
      pos = eol + 1;
      continue;
    }
    if (rest.substr(0, 2) == "/-") {
      int depth = 1;
      std::size_t j = i + 2;
      while (j + 1 < src.size() && depth > 0) {
        if (src[j] == '/' && src[j + 1] == '-') {
          ++depth;
          j += 2;
        } else if (src[j] == '-' && src[j + 1] == '/') {
          --depth;
          j += 2;
        } else {
          ++j;
        }
      }
      pos = j;
      continue;
    }
    auto starts_word = [&](std::string_view w) {
      return rest.size() > w.size() && rest.substr(0, w.size()) == w &&
             std::isspace(static_cast<unsigned char>(rest[w.size()]));
    };
    if (starts_word("import") || starts_word("open")) {
      std::size_t eol = src.find('\n', i);
      if (eol == std::string_view::npos) return src.size();
      pos = eol + 1;
      continue;
    }
    return line_start;
  }
  return src.size();
}

SourcePos pos_at(std::string_view src, std::size_t offset) {
  SourcePos p{offset, 1, 1};
  for (std::size_t i = 0; i < offset && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

}  // namespace

namespace {

// With allow_unknown_prelude, everything before the last line that starts a
// theorem/lemma declaration (e.g. a `def` block) is folded into the header
// and re-attached verbatim on print.
std::size_t prelude_end(std::string_view src, std::size_t from) {
  std::size_t best = std::string_view::npos;
  std::size_t pos = from;
  while (pos < src.size()) {
    std::size_t i = pos;
    while (i < src.size() && (src[i] == ' ' || src[i] == '\t')) ++i;
    std::string_view rest = src.substr(i);
    if (rest.rfind("theorem ", 0) == 0 || rest.rfind("lemma ", 0) == 0) best = pos;
    std::size_t eol = src.find('\n', pos);
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return best == std::string_view::npos ? from : best;
}

}  // namespace

ParseResult parse_statement(std::string_view source, const ParseOptions& opts) {
  std::size_t hdr = header_end(source);
  if (opts.allow_unknown_prelude) hdr = prelude_end(source, hdr);
  std::string header(source.substr(0, hdr));

  detail::Lexer lexer(source, pos_at(source, hdr));
  std::vector<Token> tokens;
  std::string proof_rest;
  detail::LexError lex_err;
  if (!lexer.run(tokens, proof_rest, lex_err)) {
    return ParseResult{std::nullopt,
                       ParseError{lex_err.pos, "valid token", lex_err.what}};
  }

  try {
    Parser p(std::move(tokens), opts);
    Statement stmt = p.parse_theorem(opts, std::move(header));
    if (proof_rest.find_first_not_of(" \t\r\n") == std::string::npos) {
      return ParseResult{std::nullopt,
                         ParseError{pos_at(source, source.size()), "proof after ':='",
                                    "<end of input>"}};
    }
    return ParseResult{std::move(stmt), std::nullopt};
  } catch (const ParseAbort& abort) {
    return ParseResult{std::nullopt, abort.err};
  }
}

ExprParseResult parse_expression(std::string_view source) {
  detail::Lexer lexer(source);
  std::vector<Token> tokens;
  std::string proof_rest;
  detail::LexError lex_err;
  if (!lexer.run(tokens, proof_rest, lex_err)) {
    return ExprParseResult{nullptr, ParseError{lex_err.pos, "valid token", lex_err.what}};
  }
  try {
    ParseOptions opts;
    Parser p(std::move(tokens), opts);
    ExprPtr e = p.parse_expr(0);
    p.expect(TokKind::End, "end of input");
    return ExprParseResult{e, std::nullopt};
  } catch (const ParseAbort& abort) {
    return ExprParseResult{nullptr, abort.err};
  }
}

}  // namespace leanevo
