#include "lexer.hpp"

#include <array>
#include <cctype>
#include <charconv>

namespace pichan::detail {

namespace {

constexpr std::array<std::string_view, 8> kKeywords = {
    "nil", "new", "in", "repeat", "true", "false", "unit", "extern"};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

[[noreturn]] void fail(const SourceSpan& span, const std::string& message) {
  throw DiagnosticError({Diagnostic{span, Severity::Error, "E-SYNTAX", message}});
}

}  // namespace

bool is_keyword(std::string_view text) {
  for (auto k : kKeywords) {
    if (k == text) return true;
  }
  return false;
}

bool is_identifier(std::string_view text) {
  if (text.empty() || !ident_start(text.front())) return false;
  for (char c : text) {
    if (!ident_char(c)) return false;
  }
  return !is_keyword(text);
}

std::vector<Token> tokenize(std::string_view text, const std::string& file) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }

    Token tok;
    tok.span = SourceSpan{file, line, col, 1};
    const std::size_t start = i;

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      tok.kind = TokenKind::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, tok.number);
      if (ec != std::errc() || ptr != text.data() + j) {
        fail(tok.span, "integer literal out of range");
      }
      tok.kind = TokenKind::Int;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      advance(1);
      tok.kind = TokenKind::Str;
      while (true) {
        if (i >= text.size() || text[i] == '\n') fail(tok.span, "unterminated string literal");
        char d = text[i];
        if (d == '"') {
          advance(1);
          break;
        }
        if (d == '\\') {
          if (i + 1 >= text.size()) fail(tok.span, "unterminated string literal");
          switch (text[i + 1]) {
            case 'n': tok.text += '\n'; break;
            case 't': tok.text += '\t'; break;
            case '"': tok.text += '"'; break;
            case '\\': tok.text += '\\'; break;
            default: fail(tok.span, "unknown escape in string literal");
          }
          advance(2);
        } else {
          tok.text += d;
          advance(1);
        }
      }
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      tok.kind = TokenKind::Symbol;
      tok.text = "->";
      advance(2);
    } else if (std::string_view("!?()<>,.|={}:;").find(c) != std::string_view::npos) {
      tok.kind = TokenKind::Symbol;
      tok.text = std::string(1, c);
      advance(1);
    } else {
      fail(tok.span, std::string("unexpected character '") + c + "'");
    }
    tok.span.length = i - start;
    out.push_back(std::move(tok));
  }

  Token end;
  end.kind = TokenKind::End;
  end.span = SourceSpan{file, line, col, 1};
  out.push_back(std::move(end));
  return out;
}

}  // namespace pichan::detail
