#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pichan/fusion_env.hpp"
#include "pichan/interop.hpp"
#include "pichan/program.hpp"

namespace pichan {

// xorshift64* seeded through splitmix64. Picks are next() % n.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(next() % n); }

 private:
  std::uint64_t state_;
};

enum class RedexKind { Comm, Fusion, Unfold, HostCall, HostReturn };

struct Redex {
  RedexKind kind = RedexKind::Comm;
  std::size_t first = 0;   // thread index; the output for Comm
  std::size_t second = 0;  // the input for Comm, otherwise unused
  std::size_t decl = 0;    // HostCall / HostReturn
  std::size_t method = 0;

  friend bool operator==(const Redex&, const Redex&) = default;
};

enum class EventKind { Comm, FusionApplied, RepeatUnfold, HostCall, HostReturn, Clash, Violation, Fault };

std::string event_kind_name(EventKind k);  // comm, fusion-applied, ...

struct TraceEvent {
  std::uint64_t step = 0;
  EventKind kind = EventKind::Comm;
  std::string details;
};

enum class RunStatus { Terminated, Stuck, Clash, Violation, StepLimit, Fault };

std::string status_name(RunStatus s);  // terminated, stuck-with-residuals, ...

struct Residual {
  std::string subject;  // display#id
  bool output = true;
  std::size_t arity = 0;
};

struct StuckReport {
  std::vector<Residual> residuals;
  // Host results that were staged but never received: alias.method.
  std::vector<std::string> undelivered;

  std::string to_string() const;
};

class NotStuck : public Error {
 public:
  using Error::Error;
};

class Machine {
 public:
  // Binds the externs (nothing is constructed) and loads main, desugaring it
  // first if needed. Throws what resolve_externs throws.
  Machine(const Program& program, const HostRegistry& registry);

  std::vector<Redex> enumerate_redexes() const;

  // Performs one redex. Clash, violation and fault events halt the machine.
  TraceEvent apply(const Redex& r);

  // Picks a redex uniformly; nullopt when there is none or the machine halted.
  std::optional<TraceEvent> step(Rng& rng);

  // Throws NotStuck while redexes remain.
  StuckReport detect_stuck() const;

  const std::vector<Process>& soup() const { return soup_; }
  const FusionEnv& env() const { return env_; }
  const std::vector<EndpointState>& endpoints() const { return endpoints_; }
  const std::vector<EffectRecord>& effects() const { return effects_; }
  const Program& program() const { return program_; }
  std::uint64_t steps() const { return step_; }
  std::optional<RunStatus> halted() const { return halted_; }
  const std::string& halt_message() const { return halt_message_; }

 private:
  void insert(const Process& p);
  bool could_interact(const Process& body, const std::vector<Redex>& others) const;
  std::optional<std::pair<std::size_t, std::size_t>> extern_of(const Name& n, bool call) const;
  TraceEvent halt(RunStatus status, EventKind kind, std::string details, std::string message);

  Program program_;
  std::vector<Binding> bindings_;
  std::vector<Process> soup_;
  FusionEnv env_;
  std::vector<EndpointState> endpoints_;
  std::vector<EffectRecord> effects_;
  NameSupply fresh_;
  std::uint64_t step_ = 0;
  std::optional<RunStatus> halted_;
  std::string halt_message_;
};

struct Trace {
  std::vector<TraceEvent> events;
  RunStatus status = RunStatus::Terminated;
  std::optional<StuckReport> stuck;
  std::vector<EffectRecord> effects;
  std::string message;  // why the run halted, for clash/violation/fault
};

// Steps until the machine is stuck or halts, or max_steps events happened.
// The run's host effects are appended to registry.log().
Trace run(const Program& p, std::uint64_t seed, std::uint64_t max_steps,
          HostRegistry& registry);

std::string trace_lines(const Trace& t);  // step|kind|details per line
std::string trace_json(const Trace& t);   // JSON array of {step, kind, details}

}  // namespace pichan
