#pragma once

#include <map>
#include <string>
#include <vector>

#include "pichan/diagnostic.hpp"
#include "pichan/program.hpp"

namespace pichan {

struct Sort {
  enum class Kind { Chan, Int, Str, Bool, Unit };
  Kind kind = Kind::Chan;
  std::vector<Sort> payload;  // Chan only

  static Sort chan(std::vector<Sort> payload = {}) { return Sort{Kind::Chan, std::move(payload)}; }
  static Sort of(BaseSort s);  // Void maps to Unit

  std::string to_string() const;  // chan(int, chan()), int, ...
  friend bool operator==(const Sort& a, const Sort& b) {
    return a.kind == b.kind && a.payload == b.payload;
  }
};

// Sorts inferred for every name in the program (keyed by id). Unconstrained
// channel payloads default to chan().
struct SortResult {
  std::map<std::uint64_t, Sort> sorts;
  std::vector<Diagnostic> diagnostics;
};

SortResult infer_sorts(const Program& p);

// E-SORT diagnostics for a core program.
std::vector<Diagnostic> check_sorts(const Program& p);

// E-PROTO diagnostics: every method's automaton must be the two-state cycle
// call(params) then return(result).
std::vector<Diagnostic> check_protocol_schema(const ExternDecl& d);
bool is_canonical_protocol(const ExternMethod& m, const ProtocolAutomaton& a);

// E-USE errors and W-PAR warnings from a per-thread walk of main.
std::vector<Diagnostic> check_extern_usage(const Program& p);

// All of the above, in pipeline order.
std::vector<Diagnostic> check_program(const Program& p);

}  // namespace pichan
