#pragma once

#include <string>
#include <utility>

#include "pichan/parser.hpp"

namespace pichan::testing {

// The Account interface block exactly as the language's reference example
// lays it out.
inline const char* const kAccountBlock = R"(extern FClass -> class Account {
    void readn(){ call readn:
    void; return Ret1: void;
    } acceded as {rec S {readn().Ret1().S}} int
    read(){ call read: void; return Ret2: int;
    } acceded as {rec S {read().Ret2(int).S}} }
)";

inline Program account_program(const std::string& main) {
  return desugar(parse_program(std::string(kAccountBlock) + main));
}

// Core main process of `text`.
inline Process term(const std::string& text) {
  return desugar(parse_program(text)).main;
}

// Two terms parsed together so that equally spelled free names share ids.
inline std::pair<Process, Process> term_pair(const std::string& a, const std::string& b) {
  Process both = term("(" + a + ") | (" + b + ")");
  const auto& p = *both.get_if<Par>();
  return {p.left, p.right};
}

}  // namespace pichan::testing
