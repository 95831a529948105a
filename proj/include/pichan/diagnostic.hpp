#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pichan/error.hpp"

namespace pichan {

// 1-based line/column. A default span (line 0) means "no source position",
// which is what programs loaded from XIR carry.
struct SourceSpan {
  std::string file;
  std::size_t line = 0;
  std::size_t column = 0;
  std::size_t length = 1;

  bool known() const { return line > 0; }
};

enum class Severity { Error, Warning };

struct Diagnostic {
  SourceSpan span;
  Severity severity = Severity::Error;
  std::string code;
  std::string message;

  // `file:line:col: severity CODE message`
  std::string to_string() const;
};

bool has_errors(const std::vector<Diagnostic>& diags);

// Thrown by the front ends (source parser, XIR reader) when they cannot
// produce a program. Carries every diagnostic collected before giving up.
class DiagnosticError : public Error {
 public:
  explicit DiagnosticError(std::vector<Diagnostic> diags);

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

}  // namespace pichan
