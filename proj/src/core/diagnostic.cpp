#include "pichan/diagnostic.hpp"

#include <algorithm>
#include <sstream>

namespace pichan {

std::string Diagnostic::to_string() const {
  std::ostringstream out;
  out << (span.file.empty() ? "<input>" : span.file) << ':' << span.line << ':'
      << span.column << ": "
      << (severity == Severity::Error ? "error" : "warning") << ' ' << code
      << ' ' << message;
  return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity == Severity::Error;
  });
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diags) {
  if (diags.empty()) return "unspecified error";
  std::string out = diags.front().to_string();
  if (diags.size() > 1) {
    out += " (+" + std::to_string(diags.size() - 1) + " more)";
  }
  return out;
}

}  // namespace

DiagnosticError::DiagnosticError(std::vector<Diagnostic> diags)
    : Error(summarize(diags)), diags_(std::move(diags)) {}

}  // namespace pichan
