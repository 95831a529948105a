#include <json.hpp>

#include "pichan/vm.hpp"

namespace pichan {

Trace run(const Program& p, std::uint64_t seed, std::uint64_t max_steps,
          HostRegistry& registry) {
  Machine m(p, registry);
  Rng rng(seed);
  Trace trace;
  while (trace.events.size() < max_steps) {
    auto event = m.step(rng);
    if (!event) break;
    trace.events.push_back(std::move(*event));
  }

  if (auto halted = m.halted()) {
    trace.status = *halted;
    trace.message = m.halt_message();
  } else if (m.soup().empty()) {
    trace.status = RunStatus::Terminated;
  } else if (m.enumerate_redexes().empty()) {
    trace.status = RunStatus::Stuck;
    trace.stuck = m.detect_stuck();
  } else {
    trace.status = RunStatus::StepLimit;
  }
  trace.effects = m.effects();
  registry.log().insert(registry.log().end(), trace.effects.begin(), trace.effects.end());
  return trace;
}

std::string trace_lines(const Trace& t) {
  std::string out;
  for (const auto& e : t.events) {
    out += std::to_string(e.step) + "|" + event_kind_name(e.kind) + "|" + e.details + "\n";
  }
  return out;
}

std::string trace_json(const Trace& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : t.events) {
    nlohmann::ordered_json j;
    j["step"] = e.step;
    j["kind"] = event_kind_name(e.kind);
    j["details"] = e.details;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace pichan
