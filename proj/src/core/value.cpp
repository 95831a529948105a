#include "pichan/value.hpp"

#include <sstream>

namespace pichan {

std::string qualified(const Name& n) {
  return n.display + "#" + std::to_string(n.id);
}

std::optional<Literal> as_literal(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::optional<Literal> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Name>) {
          return std::nullopt;
        } else {
          return Literal{x};
        }
      },
      v);
}

Value to_value(const Literal& lit) {
  return std::visit([](const auto& x) { return Value{x}; }, lit);
}

std::string literal_text(const Literal& lit) {
  struct Printer {
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(Unit) const { return "unit"; }
    std::string operator()(const std::string& s) const {
      std::string out = "\"";
      for (char c : s) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\t': out += "\\t"; break;
          default: out += c;
        }
      }
      return out + "\"";
    }
  };
  return std::visit(Printer{}, lit);
}

std::string value_text(const Value& v) {
  if (is_name(v)) return qualified(as_name(v));
  return literal_text(*as_literal(v));
}

}  // namespace pichan
