#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "leanevo/ast.hpp"

namespace leanevo::detail {

enum class TokKind {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Colon,
  Assign,  // :=
  Comma,
  DotDot,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  SMul,     // •
  And,      // ∧
  Or,       // ∨
  Arrow,    // → or ->
  Iff,      // ↔ or <->
  Dvd,      // ∣ or |
  Not,      // ¬
  Eq,
  Ne,  // ≠ or !=
  Lt,
  Le,  // ≤ or <=
  Gt,
  Ge,  // ≥ or >=
  Mem,      // ∈
  Forall,   // ∀
  Exists,   // ∃
  Integral, // ∫
  End,
};

struct Token {
  TokKind kind{TokKind::End};
  std::string text;
  SourcePos pos;
};

struct LexError {
  SourcePos pos;
  std::string what;
};

// Tokenizes a statement body. Stops after emitting Assign (`:=`); the
// remainder of the input is the proof, returned untokenized.
class Lexer {
 public:
  // `start` lets the caller skip an already-consumed prefix (the header)
  // while keeping error positions relative to the full input.
  explicit Lexer(std::string_view src, SourcePos start = SourcePos{});

  // Either fills `tokens` and `proof_rest`, or reports the error.
  bool run(std::vector<Token>& tokens, std::string& proof_rest, LexError& err);

 private:
  std::string_view src_;
  std::size_t pos_{0};
  int line_{1};
  int col_{1};

  SourcePos here() const { return SourcePos{pos_, line_, col_}; }
  bool eof() const { return pos_ >= src_.size(); }
  char peek_byte(std::size_t ahead = 0) const;
  uint32_t peek_cp(std::size_t* len = nullptr) const;
  void advance(std::size_t bytes);
  void skip_ws_and_comments();
};

// UTF-8 decode of the codepoint starting at src[i]; len receives the byte
// length (1 on malformed input, which is passed through as Latin-1).
uint32_t decode_utf8(std::string_view src, std::size_t i, std::size_t& len);

bool is_ident_start_cp(uint32_t cp);
bool is_ident_continue_cp(uint32_t cp);

}  // namespace leanevo::detail
