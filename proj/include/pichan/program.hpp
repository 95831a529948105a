#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pichan/diagnostic.hpp"
#include "pichan/name.hpp"
#include "pichan/process.hpp"

namespace pichan {

// Sorts that can cross the host boundary.
enum class BaseSort { Void, Int, Str, Bool };

std::string_view sort_name(BaseSort s);  // void, int, string, bool
std::optional<BaseSort> parse_sort_name(std::string_view text);

struct ProtocolTransition {
  std::size_t from = 0;
  Name channel;
  std::vector<BaseSort> payload;
  std::size_t to = 0;
};

// Behavioural type of an extern method: a finite automaton over channel
// actions, declared as `rec S {a(..).b(..).S}`.
struct ProtocolAutomaton {
  std::string var = "S";
  std::size_t state_count = 0;
  std::size_t start = 0;
  std::vector<ProtocolTransition> transitions;

  const ProtocolTransition* step(std::size_t state, const Name& channel) const;

  // The transitions in order when the automaton is the single cycle
  // start -> 1 -> ... -> start that the `rec` syntax denotes.
  std::optional<std::vector<ProtocolTransition>> as_cycle() const;

  static ProtocolAutomaton cycle(
      std::string var,
      std::vector<std::pair<Name, std::vector<BaseSort>>> actions);

  // Ignores `var`; transitions are compared as a set.
  friend bool operator==(const ProtocolAutomaton& a, const ProtocolAutomaton& b);
};

struct ExternMethod {
  std::string name;
  std::vector<BaseSort> params;
  BaseSort returns = BaseSort::Void;
  Name call_channel;
  Name return_channel;
  ProtocolAutomaton protocol;
  // False when the `acceded as` clause was omitted and `protocol` was
  // synthesized.
  bool explicit_protocol = false;
  SourceSpan span;

  // Payload carried by the return channel: empty for void.
  std::vector<BaseSort> return_payload() const;
};

// start --call(params)--> 1 --ret(result)--> start
ProtocolAutomaton canonical_protocol(const ExternMethod& m);

struct ExternDecl {
  std::string alias;
  std::string class_name;
  std::vector<ExternMethod> methods;
  SourceSpan span;
};

struct Program {
  std::vector<ExternDecl> externs;
  Process main;
};

// Exact equality: names by id, spans and the explicit-protocol flag ignored.
bool operator==(const ExternMethod& a, const ExternMethod& b);
bool operator==(const ExternDecl& a, const ExternDecl& b);
bool operator==(const Program& a, const Program& b);

// Equality across parses: extern channels by display, main up to alpha with
// free names matched by display.
bool equivalent(const ExternDecl& a, const ExternDecl& b);
bool equivalent(const Program& a, const Program& b);

std::uint64_t max_name_id(const Program& p);

// Where an extern channel lives.
struct ExternChannel {
  std::size_t decl = 0;
  std::size_t method = 0;
  bool is_call = true;
};

std::optional<ExternChannel> find_extern_channel(const Program& p,
                                                 const Name& n);

}  // namespace pichan
