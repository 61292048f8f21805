#include "lexer.hpp"

#include <cctype>
#include <set>

namespace dlcert {

SyntaxError::SyntaxError(SourcePosition pos, std::vector<std::string> expected, std::string found)
    : Error([&] {
        std::string msg = "line " + std::to_string(pos.line) + ", column " +
                          std::to_string(pos.column) + ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
          if (i) msg += i + 1 == expected.size() ? " or " : ", ";
          msg += expected[i];
        }
        return msg + ", found " + found;
      }()),
      pos_(pos),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

const char* reason_text(NotPolynomialReason r) {
  switch (r) {
    case NotPolynomialReason::DivisionByState: return "division by a state variable";
    case NotPolynomialReason::DivisionByParameter: return "division by a non-constant parameter";
    case NotPolynomialReason::MinMax: return "min/max";
    case NotPolynomialReason::SymbolicExponent: return "symbolic exponent";
  }
  return "?";
}

}  // namespace

NotPolynomial::NotPolynomial(std::string subterm, NotPolynomialReason reason)
    : Error("not a polynomial (" + std::string(reason_text(reason)) + "): " + subterm),
      subterm_(std::move(subterm)),
      reason_(reason) {}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational q(text.substr(0, slash) + "/" + text.substr(slash + 1), 10);
    q.canonicalize();
    return q;
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(text, 10);
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t frac = text.size() - dot - 1;
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
  Rational q{mpz_class(digits.empty() ? "0" : digits, 10), den};
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace dlcert

namespace dlcert::detail {

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Prime: return "'''";
    case Tok::Question: return "'?'";
    case Tok::Assign: return "':='";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Le: return "'<='";
    case Tok::Lt: return "'<'";
    case Tok::Ge: return "'>='";
    case Tok::Gt: return "'>'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Bang: return "'!'";
    case Tok::Arrow: return "'->'";
    case Tok::PlusPlus: return "'++'";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool is_reserved(const std::string& word) {
  static const std::set<std::string> words = {
      "model", "def",  "const", "program", "theorem", "certificate", "loop_invariant",
      "cut",   "variant", "if", "else",    "while",   "true",        "false",
      "min",   "max"};
  return words.count(word) > 0;
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  bool at_line_start = true;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
        at_line_start = true;
      } else {
        ++col;
      }
      ++i;
    }
  };

  while (i < n) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.pos = {line, col};
    tok.line_start = at_line_start;
    at_line_start = false;
    auto unsigned_digit = [&](std::size_t k) {
      return k < n && std::isdigit(static_cast<unsigned char>(text[k]));
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      tok.kind = Tok::Ident;
      tok.text = text.substr(i, j - i);
      advance(j - i);
    } else if (unsigned_digit(i)) {
      std::size_t j = i;
      while (unsigned_digit(j)) ++j;
      if (j < n && text[j] == '.' && unsigned_digit(j + 1)) {
        ++j;
        while (unsigned_digit(j)) ++j;
      } else if (j < n && text[j] == '/' && unsigned_digit(j + 1)) {
        // "p/q" with no whitespace is one rational literal
        ++j;
        while (unsigned_digit(j)) ++j;
      }
      tok.kind = Tok::Number;
      tok.text = text.substr(i, j - i);
      if (tok.text.find('/') != std::string::npos) {
        std::string den = tok.text.substr(tok.text.find('/') + 1);
        if (mpz_class(den, 10) == 0) throw SyntaxError(tok.pos, {"nonzero denominator"}, tok.text);
      }
      tok.value = parse_rational(tok.text);
      advance(j - i);
    } else {
      auto two = [&](char a, char b) { return c == a && i + 1 < n && text[i + 1] == b; };
      std::size_t len = 1;
      if (two(':', '=')) { tok.kind = Tok::Assign; len = 2; }
      else if (two('!', '=')) { tok.kind = Tok::Ne; len = 2; }
      else if (two('<', '=')) { tok.kind = Tok::Le; len = 2; }
      else if (two('>', '=')) { tok.kind = Tok::Ge; len = 2; }
      else if (two('-', '>')) { tok.kind = Tok::Arrow; len = 2; }
      else if (two('+', '+')) { tok.kind = Tok::PlusPlus; len = 2; }
      else {
        switch (c) {
          case '+': tok.kind = Tok::Plus; break;
          case '-': tok.kind = Tok::Minus; break;
          case '*': tok.kind = Tok::Star; break;
          case '/': tok.kind = Tok::Slash; break;
          case '^': tok.kind = Tok::Caret; break;
          case '(': tok.kind = Tok::LParen; break;
          case ')': tok.kind = Tok::RParen; break;
          case '{': tok.kind = Tok::LBrace; break;
          case '}': tok.kind = Tok::RBrace; break;
          case '[': tok.kind = Tok::LBracket; break;
          case ']': tok.kind = Tok::RBracket; break;
          case ',': tok.kind = Tok::Comma; break;
          case ';': tok.kind = Tok::Semi; break;
          case '\'': tok.kind = Tok::Prime; break;
          case '?': tok.kind = Tok::Question; break;
          case '=': tok.kind = Tok::Eq; break;
          case '<': tok.kind = Tok::Lt; break;
          case '>': tok.kind = Tok::Gt; break;
          case '&': tok.kind = Tok::Amp; break;
          case '|': tok.kind = Tok::Bar; break;
          case '!': tok.kind = Tok::Bang; break;
          default:
            throw SyntaxError(tok.pos, {"a token"}, std::string("'") + c + "'");
        }
      }
      tok.text = text.substr(i, len);
      advance(len);
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Tok::End;
  end.pos = {line, col};
  end.line_start = true;
  out.push_back(end);
  return out;
}

}  // namespace dlcert::detail
