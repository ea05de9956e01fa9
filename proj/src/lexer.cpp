#include "lexer.hpp"

#include <cctype>

namespace leanevo::detail {

namespace {

// Codepoints with dedicated tokens; everything else non-ASCII is an
// identifier character (ℝ, α, h₀, ...).
constexpr uint32_t kAnd = 0x2227, kOr = 0x2228, kArrow = 0x2192, kIff = 0x2194,
                   kDvd = 0x2223, kNot = 0x00AC, kNe = 0x2260, kLe = 0x2264,
                   kGe = 0x2265, kMem = 0x2208, kForall = 0x2200, kExists = 0x2203,
                   kIntegral = 0x222B, kSMul = 0x2022;

bool is_operator_cp(uint32_t cp) {
  switch (cp) {
    case kAnd:
    case kOr:
    case kArrow:
    case kIff:
    case kDvd:
    case kNot:
    case kNe:
    case kLe:
    case kGe:
    case kMem:
    case kForall:
    case kExists:
    case kIntegral:
    case kSMul:
      return true;
    default:
      return false;
  }
}

}  // namespace

uint32_t decode_utf8(std::string_view src, std::size_t i, std::size_t& len) {
  unsigned char c0 = static_cast<unsigned char>(src[i]);
  if (c0 < 0x80) {
    len = 1;
    return c0;
  }
  auto cont = [&](std::size_t k) -> bool {
    return i + k < src.size() && (static_cast<unsigned char>(src[i + k]) & 0xC0) == 0x80;
  };
  if ((c0 & 0xE0) == 0xC0 && cont(1)) {
    len = 2;
    return ((c0 & 0x1Fu) << 6) | (static_cast<unsigned char>(src[i + 1]) & 0x3Fu);
  }
  if ((c0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    len = 3;
    return ((c0 & 0x0Fu) << 12) | ((static_cast<unsigned char>(src[i + 1]) & 0x3Fu) << 6) |
           (static_cast<unsigned char>(src[i + 2]) & 0x3Fu);
  }
  if ((c0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    len = 4;
    return ((c0 & 0x07u) << 18) | ((static_cast<unsigned char>(src[i + 1]) & 0x3Fu) << 12) |
           ((static_cast<unsigned char>(src[i + 2]) & 0x3Fu) << 6) |
           (static_cast<unsigned char>(src[i + 3]) & 0x3Fu);
  }
  len = 1;
  return c0;
}

bool is_ident_start_cp(uint32_t cp) {
  if (cp < 0x80) {
    return std::isalpha(static_cast<int>(cp)) || cp == '_';
  }
  return !is_operator_cp(cp);
}

bool is_ident_continue_cp(uint32_t cp) {
  if (cp < 0x80) {
    return std::isalnum(static_cast<int>(cp)) || cp == '_' || cp == '\'';
  }
  return !is_operator_cp(cp);
}

Lexer::Lexer(std::string_view src, SourcePos start)
    : src_(src), pos_(start.offset), line_(start.line), col_(start.column) {}

char Lexer::peek_byte(std::size_t ahead) const {
  return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
}

uint32_t Lexer::peek_cp(std::size_t* len) const {
  std::size_t l = 0;
  uint32_t cp = eof() ? 0 : decode_utf8(src_, pos_, l);
  if (len) *len = l;
  return cp;
}

void Lexer::advance(std::size_t bytes) {
  for (std::size_t k = 0; k < bytes && pos_ < src_.size(); ++k, ++pos_) {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
  }
}

void Lexer::skip_ws_and_comments() {
  for (;;) {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek_byte()))) advance(1);
    if (peek_byte() == '-' && peek_byte(1) == '-') {
      while (!eof() && peek_byte() != '\n') advance(1);
      continue;
    }
    if (peek_byte() == '/' && peek_byte(1) == '-') {
      int depth = 1;
      advance(2);
      while (!eof() && depth > 0) {
        if (peek_byte() == '/' && peek_byte(1) == '-') {
          ++depth;
          advance(2);
        } else if (peek_byte() == '-' && peek_byte(1) == '/') {
          --depth;
          advance(2);
        } else {
          advance(1);
        }
      }
      continue;
    }
    return;
  }
}

bool Lexer::run(std::vector<Token>& tokens, std::string& proof_rest, LexError& err) {
  auto push = [&](TokKind k, std::string text, SourcePos pos) {
    tokens.push_back(Token{k, std::move(text), pos});
  };

  for (;;) {
    skip_ws_and_comments();
    if (eof()) {
      push(TokKind::End, "<end of input>", here());
      proof_rest.clear();
      return true;
    }
    SourcePos start = here();
    char c = peek_byte();

    if (c == ':' && peek_byte(1) == '=') {
      advance(2);
      push(TokKind::Assign, ":=", start);
      proof_rest.assign(src_.substr(pos_));
      push(TokKind::End, "<end of input>", here());
      return true;
    }

    switch (c) {
      case '(': advance(1); push(TokKind::LParen, "(", start); continue;
      case ')': advance(1); push(TokKind::RParen, ")", start); continue;
      case '{': advance(1); push(TokKind::LBrace, "{", start); continue;
      case '}': advance(1); push(TokKind::RBrace, "}", start); continue;
      case ':': advance(1); push(TokKind::Colon, ":", start); continue;
      case ',': advance(1); push(TokKind::Comma, ",", start); continue;
      case '+': advance(1); push(TokKind::Plus, "+", start); continue;
      case '*': advance(1); push(TokKind::Star, "*", start); continue;
      case '/': advance(1); push(TokKind::Slash, "/", start); continue;
      case '^': advance(1); push(TokKind::Caret, "^", start); continue;
      case '=': advance(1); push(TokKind::Eq, "=", start); continue;
      case '|': advance(1); push(TokKind::Dvd, "|", start); continue;
      default: break;
    }

    if (c == '-') {
      if (peek_byte(1) == '>') {
        advance(2);
        push(TokKind::Arrow, "->", start);
      } else {
        advance(1);
        push(TokKind::Minus, "-", start);
      }
      continue;
    }
    if (c == '<') {
      if (peek_byte(1) == '=') {
        advance(2);
        push(TokKind::Le, "<=", start);
      } else if (peek_byte(1) == '-' && peek_byte(2) == '>') {
        advance(3);
        push(TokKind::Iff, "<->", start);
      } else {
        advance(1);
        push(TokKind::Lt, "<", start);
      }
      continue;
    }
    if (c == '>') {
      if (peek_byte(1) == '=') {
        advance(2);
        push(TokKind::Ge, ">=", start);
      } else {
        advance(1);
        push(TokKind::Gt, ">", start);
      }
      continue;
    }
    if (c == '!') {
      if (peek_byte(1) == '=') {
        advance(2);
        push(TokKind::Ne, "!=", start);
        continue;
      }
      err = LexError{start, "unexpected character '!'"};
      return false;
    }
    if (c == '.') {
      if (peek_byte(1) == '.') {
        advance(2);
        push(TokKind::DotDot, "..", start);
        continue;
      }
      err = LexError{start, "unexpected character '.'"};
      return false;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t begin = pos_;
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek_byte()))) advance(1);
      if (peek_byte() == '.' && std::isdigit(static_cast<unsigned char>(peek_byte(1)))) {
        advance(1);
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek_byte()))) advance(1);
      }
      push(TokKind::Number, std::string(src_.substr(begin, pos_ - begin)), start);
      continue;
    }

    std::size_t cplen = 0;
    uint32_t cp = peek_cp(&cplen);
    if (cp >= 0x80) {
      switch (cp) {
        case kAnd: advance(cplen); push(TokKind::And, "∧", start); continue;
        case kOr: advance(cplen); push(TokKind::Or, "∨", start); continue;
        case kArrow: advance(cplen); push(TokKind::Arrow, "→", start); continue;
        case kIff: advance(cplen); push(TokKind::Iff, "↔", start); continue;
        case kDvd: advance(cplen); push(TokKind::Dvd, "∣", start); continue;
        case kNot: advance(cplen); push(TokKind::Not, "¬", start); continue;
        case kNe: advance(cplen); push(TokKind::Ne, "≠", start); continue;
        case kLe: advance(cplen); push(TokKind::Le, "≤", start); continue;
        case kGe: advance(cplen); push(TokKind::Ge, "≥", start); continue;
        case kMem: advance(cplen); push(TokKind::Mem, "∈", start); continue;
        case kForall: advance(cplen); push(TokKind::Forall, "∀", start); continue;
        case kExists: advance(cplen); push(TokKind::Exists, "∃", start); continue;
        case kIntegral: advance(cplen); push(TokKind::Integral, "∫", start); continue;
        case kSMul: advance(cplen); push(TokKind::SMul, "•", start); continue;
        default: break;
      }
    }

    if (is_ident_start_cp(cp)) {
      std::size_t begin = pos_;
      advance(cplen);
      for (;;) {
        if (eof()) break;
        // qualified name: consume '.' only when an identifier follows
        if (peek_byte() == '.') {
          std::size_t l2 = 0;
          if (pos_ + 1 < src_.size() &&
              is_ident_start_cp(decode_utf8(src_, pos_ + 1, l2))) {
            advance(1);
            continue;
          }
          break;
        }
        std::size_t l = 0;
        uint32_t cc = decode_utf8(src_, pos_, l);
        if (!is_ident_continue_cp(cc)) break;
        advance(l);
      }
      push(TokKind::Ident, std::string(src_.substr(begin, pos_ - begin)), start);
      continue;
    }

    err = LexError{start, "unexpected character"};
    return false;
  }
}

}  // namespace leanevo::detail
