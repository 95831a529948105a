#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pichan/diagnostic.hpp"

namespace pichan::detail {

enum class TokenKind { Ident, Int, Str, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // identifier, symbol, or decoded string contents
  std::int64_t number = 0;
  SourceSpan span;
};

// Symbols: ! ? ( ) < > , . | = { } : ; ->
// Throws DiagnosticError on malformed input.
std::vector<Token> tokenize(std::string_view text, const std::string& file);

bool is_identifier(std::string_view text);
bool is_keyword(std::string_view text);

}  // namespace pichan::detail
