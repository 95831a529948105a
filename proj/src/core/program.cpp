#include "pichan/program.hpp"

#include <algorithm>
#include <tuple>

namespace pichan {

std::string_view sort_name(BaseSort s) {
  switch (s) {
    case BaseSort::Void: return "void";
    case BaseSort::Int: return "int";
    case BaseSort::Str: return "string";
    case BaseSort::Bool: return "bool";
  }
  return "?";
}

std::optional<BaseSort> parse_sort_name(std::string_view text) {
  if (text == "void") return BaseSort::Void;
  if (text == "int") return BaseSort::Int;
  if (text == "string") return BaseSort::Str;
  if (text == "bool") return BaseSort::Bool;
  return std::nullopt;
}

const ProtocolTransition* ProtocolAutomaton::step(std::size_t state,
                                                  const Name& channel) const {
  for (const auto& t : transitions) {
    if (t.from == state && t.channel == channel) return &t;
  }
  return nullptr;
}

std::optional<std::vector<ProtocolTransition>> ProtocolAutomaton::as_cycle() const {
  if (state_count == 0 || transitions.size() != state_count || start >= state_count) {
    return std::nullopt;
  }
  std::vector<ProtocolTransition> out;
  std::vector<bool> seen(state_count, false);
  std::size_t state = start;
  for (std::size_t i = 0; i < state_count; ++i) {
    if (seen[state]) return std::nullopt;
    seen[state] = true;
    auto it = std::find_if(transitions.begin(), transitions.end(),
                           [&](const ProtocolTransition& t) { return t.from == state; });
    if (it == transitions.end()) return std::nullopt;
    out.push_back(*it);
    state = it->to;
  }
  if (state != start) return std::nullopt;
  return out;
}

ProtocolAutomaton ProtocolAutomaton::cycle(
    std::string var, std::vector<std::pair<Name, std::vector<BaseSort>>> actions) {
  ProtocolAutomaton a;
  a.var = std::move(var);
  a.state_count = actions.size();
  a.start = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    a.transitions.push_back(ProtocolTransition{i, std::move(actions[i].first),
                                               std::move(actions[i].second),
                                               (i + 1) % actions.size()});
  }
  return a;
}

namespace {

auto transition_key(const ProtocolTransition& t) {
  return std::tie(t.from, t.channel, t.payload, t.to);
}

std::vector<ProtocolTransition> sorted(std::vector<ProtocolTransition> ts) {
  std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
    return transition_key(a) < transition_key(b);
  });
  return ts;
}

}  // namespace

bool operator==(const ProtocolAutomaton& a, const ProtocolAutomaton& b) {
  if (a.state_count != b.state_count || a.start != b.start ||
      a.transitions.size() != b.transitions.size()) {
    return false;
  }
  auto ta = sorted(a.transitions);
  auto tb = sorted(b.transitions);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (transition_key(ta[i]) != transition_key(tb[i])) return false;
  }
  return true;
}

std::vector<BaseSort> ExternMethod::return_payload() const {
  if (returns == BaseSort::Void) return {};
  return {returns};
}

ProtocolAutomaton canonical_protocol(const ExternMethod& m) {
  return ProtocolAutomaton::cycle(
      "S", {{m.call_channel, m.params}, {m.return_channel, m.return_payload()}});
}

bool operator==(const ExternMethod& a, const ExternMethod& b) {
  return a.name == b.name && a.params == b.params && a.returns == b.returns &&
         a.call_channel == b.call_channel && a.return_channel == b.return_channel &&
         a.protocol == b.protocol;
}

bool operator==(const ExternDecl& a, const ExternDecl& b) {
  return a.alias == b.alias && a.class_name == b.class_name && a.methods == b.methods;
}

bool operator==(const Program& a, const Program& b) {
  return a.externs == b.externs && a.main == b.main;
}

namespace {

bool equivalent_protocol(const ProtocolAutomaton& a, const ProtocolAutomaton& b) {
  if (a.state_count != b.state_count || a.start != b.start ||
      a.transitions.size() != b.transitions.size()) {
    return false;
  }
  auto key = [](const ProtocolTransition& t) {
    return std::make_tuple(t.from, t.channel.display, t.payload, t.to);
  };
  std::vector<decltype(key(a.transitions[0]))> ka, kb;
  for (const auto& t : a.transitions) ka.push_back(key(t));
  for (const auto& t : b.transitions) kb.push_back(key(t));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

}  // namespace

bool equivalent(const ExternDecl& a, const ExternDecl& b) {
  if (a.alias != b.alias || a.class_name != b.class_name ||
      a.methods.size() != b.methods.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.methods.size(); ++i) {
    const auto& x = a.methods[i];
    const auto& y = b.methods[i];
    if (x.name != y.name || x.params != y.params || x.returns != y.returns ||
        x.call_channel.display != y.call_channel.display ||
        x.return_channel.display != y.return_channel.display ||
        !equivalent_protocol(x.protocol, y.protocol)) {
      return false;
    }
  }
  return true;
}

bool equivalent(const Program& a, const Program& b) {
  if (a.externs.size() != b.externs.size()) return false;
  for (std::size_t i = 0; i < a.externs.size(); ++i) {
    if (!equivalent(a.externs[i], b.externs[i])) return false;
  }
  return alpha_equivalent(a.main, b.main, FreeNameMatch::ByDisplay);
}

std::uint64_t max_name_id(const Program& p) {
  std::uint64_t m = max_name_id(p.main);
  for (const auto& d : p.externs) {
    for (const auto& meth : d.methods) {
      m = std::max({m, meth.call_channel.id, meth.return_channel.id});
      for (const auto& t : meth.protocol.transitions) m = std::max(m, t.channel.id);
    }
  }
  return m;
}

std::optional<ExternChannel> find_extern_channel(const Program& p, const Name& n) {
  for (std::size_t d = 0; d < p.externs.size(); ++d) {
    const auto& methods = p.externs[d].methods;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      if (methods[m].call_channel == n) return ExternChannel{d, m, true};
      if (methods[m].return_channel == n) return ExternChannel{d, m, false};
    }
  }
  return std::nullopt;
}

}  // namespace pichan
