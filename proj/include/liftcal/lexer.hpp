#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace liftcal {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Semi,
  Comma,
  Assign,  // :=
  Plus,
  Minus,
  Star,
  Less,
  Equal,   // =
  Bang,
  Amp,
  Bar,
  Implies, // =>
  Then,    // >>
  Par,     // ||
  HashIf,  // #if
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> tokenize(std::string_view src);

const char* tok_name(Tok t);

// Cursor over a token vector shared by the featexp, program and abstraction
// parsers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(size_t ahead = 0) const;
  bool at(Tok t) const { return peek().kind == t; }
  bool at_word(std::string_view w) const;
  const Token& next();
  const Token& expect(Tok t);
  void expect_word(std::string_view w);
  bool accept(Tok t);
  bool accept_word(std::string_view w);
  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

} // namespace liftcal
