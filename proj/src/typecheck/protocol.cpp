#include "pichan/typecheck.hpp"

namespace pichan {

bool is_canonical_protocol(const ExternMethod& m, const ProtocolAutomaton& a) {
  if (a.state_count != 2 || a.start >= 2 || a.transitions.size() != 2) return false;
  const std::size_t other = 1 - a.start;
  const ProtocolTransition* call = a.step(a.start, m.call_channel);
  const ProtocolTransition* ret = a.step(other, m.return_channel);
  if (!call || !ret) return false;
  // step() returns the first match; a duplicate with another target would
  // make the automaton nondeterministic, and the size check above rules out
  // anything beyond these two transitions.
  return call->to == other && call->payload == m.params && ret->to == a.start &&
         ret->payload == m.return_payload();
}

std::vector<Diagnostic> check_protocol_schema(const ExternDecl& d) {
  std::vector<Diagnostic> out;
  for (const auto& m : d.methods) {
    if (is_canonical_protocol(m, m.protocol)) continue;
    std::string expected = "rec S {" + m.call_channel.display + "(";
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      expected += (i ? ", " : "") + std::string(sort_name(m.params[i]));
    }
    expected += ")." + m.return_channel.display + "(";
    if (m.returns != BaseSort::Void) expected += sort_name(m.returns);
    expected += ").S}";
    out.push_back(Diagnostic{m.span, Severity::Error, "E-PROTO",
                             "protocol of '" + d.alias + "." + m.name +
                                 "' must be a call followed by its return, repeated: " +
                                 expected});
  }
  return out;
}

}  // namespace pichan
