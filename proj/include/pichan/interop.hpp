#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pichan/error.hpp"
#include "pichan/fusion_env.hpp"
#include "pichan/program.hpp"
#include "pichan/value.hpp"

namespace pichan {

using HostValue = Literal;

class InteropError : public Error {
 public:
  using Error::Error;
};
class DuplicateClass : public InteropError {
 public:
  using InteropError::InteropError;
};
class UnknownClass : public InteropError {
 public:
  using InteropError::InteropError;
};
class SignatureMismatch : public InteropError {
 public:
  using InteropError::InteropError;
};
class UnknownRegistry : public InteropError {
 public:
  using InteropError::InteropError;
};
class UngroundArgument : public InteropError {
 public:
  using InteropError::InteropError;
};
class HostFault : public InteropError {
 public:
  using InteropError::InteropError;
};
class ProtocolViolation : public InteropError {
 public:
  using InteropError::InteropError;
};

// Mutable fields of one host object. Kept as plain values so that copying a
// machine also copies the objects it has created.
using HostState = std::map<std::string, HostValue>;

// Effects a host operation wants recorded, in order.
using Effects = std::vector<std::string>;

struct HostMethod {
  std::vector<BaseSort> params;
  BaseSort returns = BaseSort::Void;
  std::function<HostValue(HostState&, const std::vector<HostValue>&, Effects&)> body;
};

struct HostClass {
  std::string name;
  std::function<void(HostState&, Effects&)> constructor;
  std::map<std::string, HostMethod> methods;
};

struct EffectRecord {
  std::string class_name;
  std::string event;
  std::uint64_t step = 0;

  friend bool operator==(const EffectRecord& a, const EffectRecord& b) {
    return a.class_name == b.class_name && a.event == b.event && a.step == b.step;
  }
};

// One `{"class":..,"event":..,"step":..}` object per line.
std::string effects_jsonl(const std::vector<EffectRecord>& log);

class HostRegistry {
 public:
  // Throws DuplicateClass.
  void register_class(HostClass c);
  std::shared_ptr<const HostClass> find(const std::string& name) const;
  std::vector<std::string> class_names() const;

  // Append-only; runs add their effects here when they finish.
  std::vector<EffectRecord>& log() { return log_; }
  const std::vector<EffectRecord>& log() const { return log_; }

 private:
  std::map<std::string, std::shared_ptr<const HostClass>> classes_;
  std::vector<EffectRecord> log_;
};

// "std": Account, Console, LoggingCtor, LoggingCtor2, Counter.
// Throws UnknownRegistry for any other name.
HostRegistry builtin_registry(const std::string& name = "std");
std::vector<std::string> builtin_registry_names();

// The host side of one extern declaration.
struct Binding {
  std::string alias;
  std::shared_ptr<const HostClass> host;
};

// Matches every declaration to a registered class with compatible method
// signatures. Constructs nothing. Throws UnknownClass or SignatureMismatch.
std::vector<Binding> resolve_externs(const std::vector<ExternDecl>& decls,
                                     const HostRegistry& reg);

// Endpoint of one declaration. The host object exists only once `live`.
struct EndpointState {
  bool live = false;
  HostState instance;
  std::vector<std::size_t> monitor;                 // protocol state per method
  std::vector<std::optional<HostValue>> pending;    // staged return per method

  static EndpointState initial(const ExternDecl& d);
};

// Literal values of the arguments: literals as they are, names through the
// literal attached to their fusion class. Throws UngroundArgument.
std::vector<HostValue> ground_arguments(const std::vector<Value>& args, const FusionEnv& env);

// Performs one host call: checks the monitor (ProtocolViolation, before
// anything else happens), constructs the object on first use, runs the
// method (HostFault if it throws or returns the wrong sort), advances the
// monitor and stages the result. Effects are appended to `log` at `step`.
HostValue dispatch_call(EndpointState& ep, const ExternDecl& decl, std::size_t method,
                        const Binding& binding, const std::vector<HostValue>& args,
                        std::vector<EffectRecord>& log, std::uint64_t step);

// Takes the staged return of `method` and moves its monitor along the return
// transition. Throws ProtocolViolation if the monitor has no such move.
HostValue complete_return(EndpointState& ep, const ExternDecl& decl, std::size_t method);

}  // namespace pichan
