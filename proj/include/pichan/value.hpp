#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "pichan/name.hpp"

namespace pichan {

struct Unit {
  friend bool operator==(Unit, Unit) { return true; }
  friend std::strong_ordering operator<=>(Unit, Unit) {
    return std::strong_ordering::equal;
  }
};

// Ground data: what can be attached to a fusion class or cross the host
// boundary.
using Literal = std::variant<std::int64_t, std::string, bool, Unit>;

// Anything that can appear as an output object or a fusion operand.
using Value = std::variant<Name, std::int64_t, std::string, bool, Unit>;

inline bool is_name(const Value& v) { return std::holds_alternative<Name>(v); }
inline const Name& as_name(const Value& v) { return std::get<Name>(v); }

std::optional<Literal> as_literal(const Value& v);
Value to_value(const Literal& lit);

// Source syntax for a literal: 42, "text", true, unit.
std::string literal_text(const Literal& lit);
// Names print as display#id, literals as literal_text.
std::string value_text(const Value& v);

}  // namespace pichan
