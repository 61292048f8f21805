#pragma once

#include <string>
#include <vector>

#include "dlcert/errors.hpp"
#include "dlcert/rational.hpp"

namespace dlcert::detail {

enum class Tok {
  Ident,
  Number,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Prime,
  Question,
  Assign,
  Eq,
  Ne,
  Le,
  Lt,
  Ge,
  Gt,
  Amp,
  Bar,
  Bang,
  Arrow,
  PlusPlus,
  End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Rational value;  // Number only
  SourcePosition pos;
  bool line_start = false;  // first token on its line
};

const char* describe(Tok kind);

// Throws SyntaxError on characters outside the alphabet.
std::vector<Token> lex(const std::string& text);

bool is_reserved(const std::string& word);

}  // namespace dlcert::detail
