#include "liftcal/lexer.hpp"

#include <cctype>

#include "liftcal/errors.hpp"

namespace liftcal {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + msg),
      line_(line),
      column_(column) {}

UndeclaredFeature::UndeclaredFeature(const std::string& name)
    : SemanticError("undeclared feature '" + name + "'"), name_(name) {}

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

} // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t j = 0; j < n; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') {
        advance(1);
      }
      continue;
    }
    int tl = line;
    int tc = col;
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) {
        ++j;
      }
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        ++j;
      }
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    Tok kind;
    size_t len = 1;
    if (two(':', '=')) {
      kind = Tok::Assign;
      len = 2;
    } else if (two('=', '>')) {
      kind = Tok::Implies;
      len = 2;
    } else if (two('>', '>')) {
      kind = Tok::Then;
      len = 2;
    } else if (two('|', '|')) {
      kind = Tok::Par;
      len = 2;
    } else if (c == '#' && src.substr(i, 3) == "#if" &&
               (i + 3 >= src.size() || !ident_char(src[i + 3]))) {
      kind = Tok::HashIf;
      len = 3;
    } else {
      switch (c) {
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case ';': kind = Tok::Semi; break;
        case ',': kind = Tok::Comma; break;
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '<': kind = Tok::Less; break;
        case '=': kind = Tok::Equal; break;
        case '!': kind = Tok::Bang; break;
        case '&': kind = Tok::Amp; break;
        case '|': kind = Tok::Bar; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
      }
    }
    out.push_back({kind, std::string(src.substr(i, len)), tl, tc});
    advance(len);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Assign: return "':='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Less: return "'<'";
    case Tok::Equal: return "'='";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Implies: return "'=>'";
    case Tok::Then: return "'>>'";
    case Tok::Par: return "'||'";
    case Tok::HashIf: return "'#if'";
    case Tok::End: return "end of input";
  }
  return "?";
}

const Token& TokenStream::peek(size_t ahead) const {
  size_t p = pos_ + ahead;
  return p < toks_.size() ? toks_[p] : toks_.back();
}

bool TokenStream::at_word(std::string_view w) const {
  return peek().kind == Tok::Ident && peek().text == w;
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < toks_.size() - 1) {
    ++pos_;
  }
  return t;
}

const Token& TokenStream::expect(Tok t) {
  if (!at(t)) {
    fail(std::string("expected ") + tok_name(t));
  }
  return next();
}

void TokenStream::expect_word(std::string_view w) {
  if (!at_word(w)) {
    fail("expected '" + std::string(w) + "'");
  }
  next();
}

bool TokenStream::accept(Tok t) {
  if (at(t)) {
    next();
    return true;
  }
  return false;
}

bool TokenStream::accept_word(std::string_view w) {
  if (at_word(w)) {
    next();
    return true;
  }
  return false;
}

void TokenStream::fail(const std::string& what) const {
  const Token& t = peek();
  std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(what + ", found " + found, t.line, t.column);
}

} // namespace liftcal
