#include "pichan/interop.hpp"

namespace pichan {

namespace {

bool has_sort(const HostValue& v, BaseSort s) {
  switch (s) {
    case BaseSort::Int: return std::holds_alternative<std::int64_t>(v);
    case BaseSort::Str: return std::holds_alternative<std::string>(v);
    case BaseSort::Bool: return std::holds_alternative<bool>(v);
    case BaseSort::Void: return std::holds_alternative<Unit>(v);
  }
  return false;
}

std::string signature(const std::string& name, const std::vector<BaseSort>& params,
                      BaseSort returns) {
  std::string out = std::string(sort_name(returns)) + " " + name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += sort_name(params[i]);
  }
  return out + ")";
}

}  // namespace

std::vector<Binding> resolve_externs(const std::vector<ExternDecl>& decls,
                                     const HostRegistry& reg) {
  std::vector<Binding> out;
  for (const auto& d : decls) {
    auto host = reg.find(d.class_name);
    if (!host) {
      throw UnknownClass("extern '" + d.alias + "' names class '" + d.class_name +
                         "', which is not registered");
    }
    for (const auto& m : d.methods) {
      auto it = host->methods.find(m.name);
      if (it == host->methods.end()) {
        throw SignatureMismatch("class '" + d.class_name + "' has no method '" + m.name + "'");
      }
      if (it->second.params != m.params || it->second.returns != m.returns) {
        throw SignatureMismatch(
            "extern '" + d.alias + "' declares " + signature(m.name, m.params, m.returns) +
            " but class '" + d.class_name + "' has " +
            signature(m.name, it->second.params, it->second.returns));
      }
    }
    out.push_back(Binding{d.alias, host});
  }
  return out;
}

EndpointState EndpointState::initial(const ExternDecl& d) {
  EndpointState ep;
  for (const auto& m : d.methods) ep.monitor.push_back(m.protocol.start);
  ep.pending.resize(d.methods.size());
  return ep;
}

std::vector<HostValue> ground_arguments(const std::vector<Value>& args, const FusionEnv& env) {
  std::vector<HostValue> out;
  for (const auto& a : args) {
    if (auto lit = as_literal(a)) {
      out.push_back(*lit);
      continue;
    }
    auto att = env.attachment(as_name(a));
    if (!att) {
      throw UngroundArgument("argument '" + qualified(as_name(a)) +
                             "' is not fused with any literal");
    }
    out.push_back(*att);
  }
  return out;
}

HostValue dispatch_call(EndpointState& ep, const ExternDecl& decl, std::size_t method,
                        const Binding& binding, const std::vector<HostValue>& args,
                        std::vector<EffectRecord>& log, std::uint64_t step) {
  const ExternMethod& m = decl.methods.at(method);
  const ProtocolTransition* call = m.protocol.step(ep.monitor.at(method), m.call_channel);
  if (!call) {
    throw ProtocolViolation("call on '" + m.call_channel.display + "' (" + decl.alias + "." +
                            m.name + ") is not allowed in protocol state " +
                            std::to_string(ep.monitor.at(method)));
  }
  const HostClass& host = *binding.host;
  const HostMethod& hm = host.methods.at(m.name);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i >= hm.params.size() || !has_sort(args[i], hm.params[i])) {
      throw HostFault(decl.alias + "." + m.name + ": argument " + std::to_string(i + 1) +
                      " has the wrong sort");
    }
  }

  Effects fx;
  if (!ep.live) {
    if (host.constructor) host.constructor(ep.instance, fx);
    ep.live = true;
  }
  HostValue result;
  try {
    result = hm.body(ep.instance, args, fx);
  } catch (const std::exception& e) {
    for (auto& f : fx) log.push_back(EffectRecord{host.name, std::move(f), step});
    throw HostFault(decl.alias + "." + m.name + " raised: " + e.what());
  }
  for (auto& f : fx) log.push_back(EffectRecord{host.name, std::move(f), step});
  if (!has_sort(result, m.returns)) {
    throw HostFault(decl.alias + "." + m.name + " returned a value of the wrong sort");
  }
  ep.monitor[method] = call->to;
  ep.pending[method] = result;
  return result;
}

HostValue complete_return(EndpointState& ep, const ExternDecl& decl, std::size_t method) {
  const ExternMethod& m = decl.methods.at(method);
  const ProtocolTransition* ret = m.protocol.step(ep.monitor.at(method), m.return_channel);
  if (!ret || !ep.pending.at(method)) {
    throw ProtocolViolation("return on '" + m.return_channel.display + "' (" + decl.alias +
                            "." + m.name + ") is not allowed in protocol state " +
                            std::to_string(ep.monitor.at(method)));
  }
  HostValue v = *ep.pending[method];
  ep.pending[method].reset();
  ep.monitor[method] = ret->to;
  return v;
}

}  // namespace pichan
